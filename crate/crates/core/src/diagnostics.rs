//! Empirical verification of the estimator's probabilistic behavior:
//! frequency of the second-moment event, Chebyshev concentration of the
//! correlation statistic, tails of the orthogonal-direction statistic, and
//! the error-vs-corruption-budget curve.
//!
//! Every comparison of a Monte Carlo frequency against a bound carries an
//! explicit binomial standard error; no report asserts a frequency against
//! a bound without slack.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::one_shot;
use crate::generators::Generator;
use crate::linalg::{self, Matrix};
use crate::observation::{
    analytic_params, apply_bounded_corruption, sample_ensemble, trial_seed, ObservationModel,
    SimParameters,
};
use crate::projection::ProjectionConfig;

/// Net resolution used only when reporting theoretical bound values; the
/// estimators themselves never consume it.
pub const DEFAULT_DELTA: f64 = 0.01;

/// Reported theoretical error scale xi * sqrt(k ln(L r / delta) / m).
pub fn theoretical_error_scale(
    params: &SimParameters,
    k: usize,
    lipschitz: f64,
    radius: f64,
    m: usize,
    delta: f64,
) -> f64 {
    let log_term = (lipschitz * radius / delta).ln().max(1e-12);
    params.xi_sq.sqrt() * (k as f64 * log_term / m as f64).sqrt()
}

/// Bundled knobs for the diagnostics CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsConfig {
    pub trials: usize,
    pub m: usize,
    /// Chebyshev radius for the correlation statistic.
    pub t: f64,
    /// Deviation parameter of the orthogonal-tail threshold.
    pub epsilon: f64,
    /// Net resolution for reported theoretical bounds.
    pub delta: f64,
    /// Fixed probe direction for the orthogonal-tail statistic.
    pub probe_s: Option<Vec<f64>>,
}

impl DiagnosticsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 30 {
            return Err(Error::Validation("diagnostics need trials >= 30".into()));
        }
        if self.m == 0 {
            return Err(Error::Validation("diagnostics need m >= 1".into()));
        }
        for (name, v) in [("t", self.t), ("epsilon", self.epsilon), ("delta", self.delta)] {
            if v.is_nan() || v <= 0.0 {
                return Err(Error::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

fn binomial_se(freq: f64, trials: usize) -> f64 {
    (freq * (1.0 - freq) / trials as f64).sqrt()
}

/// Frequency of the event (1/m) sum y_i^2 <= 2 xi^2 against its Chebyshev
/// lower bound 1 - theta^4 / (m xi^4).
#[derive(Debug, Clone, Serialize)]
pub struct EventFrequencyReport {
    pub frequency: f64,
    pub bound: f64,
    pub std_error: f64,
    /// frequency >= bound - 3 se
    pub satisfied: bool,
    pub trials: usize,
}

pub fn event_e_frequency(
    model: &ObservationModel,
    x: &[f64],
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<EventFrequencyReport> {
    let params = analytic_params(model.kind(), model.sigma())?;
    let mut hits = 0usize;
    for t in 0..trials {
        let ens = sample_ensemble(x, m, model, trial_seed(seed, t as u64))?;
        let mean_sq = ens.y.iter().map(|v| v * v).sum::<f64>() / m as f64;
        if mean_sq <= 2.0 * params.xi_sq {
            hits += 1;
        }
    }
    let frequency = hits as f64 / trials as f64;
    let bound = 1.0 - params.theta_4 / (m as f64 * params.xi_sq * params.xi_sq);
    let std_error = binomial_se(frequency, trials);
    Ok(EventFrequencyReport {
        frequency,
        bound,
        std_error,
        satisfied: frequency >= bound - 3.0 * std_error,
        trials,
    })
}

/// Violation frequency of |(1/m) sum y_i <a_i, x> - mu| < t against its
/// Chebyshev bound rho^2 / (m t^2).
#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationReport {
    pub tail_frequency: f64,
    pub bound: f64,
    pub std_error: f64,
    /// tail_frequency <= bound + 3 se
    pub satisfied: bool,
    pub trials: usize,
}

pub fn mu_hat_concentration(
    model: &ObservationModel,
    x: &[f64],
    m: usize,
    t: f64,
    trials: usize,
    seed: u64,
) -> Result<ConcentrationReport> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::Validation(format!("t must be positive, got {t}")));
    }
    let params = analytic_params(model.kind(), model.sigma())?;
    let mut violations = 0usize;
    for trial in 0..trials {
        let ens = sample_ensemble(x, m, model, trial_seed(seed, trial as u64))?;
        let ax = ens.a.matvec(x);
        let mu_hat = ens
            .y
            .iter()
            .zip(&ax)
            .map(|(yi, gi)| yi * gi)
            .sum::<f64>()
            / m as f64;
        if (mu_hat - params.mu).abs() >= t {
            violations += 1;
        }
    }
    let tail_frequency = violations as f64 / trials as f64;
    let bound = params.rho_sq / (m as f64 * t * t);
    let std_error = binomial_se(tail_frequency, trials);
    Ok(ConcentrationReport {
        tail_frequency,
        bound,
        std_error,
        satisfied: tail_frequency <= bound + 3.0 * std_error,
        trials,
    })
}

/// Explicit orthogonal-complement projector I - x x^T.
pub fn orthogonal_complement_projector(x: &[f64]) -> Matrix {
    let n = x.len();
    let mut p = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            *p.at_mut(i, j) -= x[i] * x[j];
        }
    }
    p
}

/// Tail behavior of (1/m) sum y_i <P_perp a_i, s> against the threshold
/// xi ||s|| sqrt(epsilon / m), compared to the exact conditional-Gaussian
/// prediction (conditioned on the observations, the statistic is zero-mean
/// Gaussian with variance (||s||^2 - <x,s>^2) sum y_i^2 / m^2).
#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalTailReport {
    pub tail_frequency: f64,
    /// Mean over trials of the per-trial conditional exceedance probability.
    pub gaussian_prediction: f64,
    pub threshold: f64,
    pub std_error: f64,
    /// tail_frequency <= prediction + 3 se
    pub satisfied: bool,
    pub statistics: Vec<f64>,
    pub trials: usize,
}

pub fn orthogonal_tail(
    model: &ObservationModel,
    x: &[f64],
    s: &[f64],
    m: usize,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<OrthogonalTailReport> {
    if s.len() != x.len() {
        return Err(Error::DimensionMismatch {
            context: "orthogonal_tail probe".into(),
            expected: x.len(),
            actual: s.len(),
        });
    }
    let s_norm = linalg::norm2(s);
    if s_norm == 0.0 {
        return Err(Error::Validation("probe direction s must be nonzero".into()));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::Validation(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let params = analytic_params(model.kind(), model.sigma())?;
    let p_perp = orthogonal_complement_projector(x);
    let ps = p_perp.matvec(s);
    // Idempotence spot check on the probe: ||P(Ps) - Ps|| <= 1e-12 ||s||.
    let pps = p_perp.matvec(&ps);
    if linalg::max_abs_diff(&pps, &ps) > 1e-12 * s_norm.max(1.0) {
        return Err(Error::Numerical(
            "orthogonal projector failed its idempotence check".into(),
        ));
    }
    let xi = params.xi_sq.sqrt();
    let threshold = xi * s_norm * epsilon.sqrt() / (m as f64).sqrt();
    // Conditional variance factor ||s||^2 - <x, s>^2, clamped against
    // rounding when s is (nearly) aligned with x.
    let align = linalg::dot(x, s);
    let var_factor = (s_norm * s_norm - align * align).max(0.0);
    let mut exceed = 0usize;
    let mut statistics = Vec::with_capacity(trials);
    let mut prediction_sum = 0.0;
    let mut prediction_var = 0.0;
    for trial in 0..trials {
        let ens = sample_ensemble(x, m, model, trial_seed(seed, trial as u64))?;
        let mut stat = 0.0;
        let mut sum_y_sq = 0.0;
        for (i, yi) in ens.y.iter().enumerate() {
            stat += yi * linalg::dot(ens.a.row(i), &ps);
            sum_y_sq += yi * yi;
        }
        stat /= m as f64;
        statistics.push(stat);
        if stat.abs() > threshold {
            exceed += 1;
        }
        let cond_var = var_factor * sum_y_sq / (m as f64 * m as f64);
        let p = if cond_var <= 0.0 {
            0.0
        } else {
            libm::erfc(threshold / (cond_var.sqrt() * std::f64::consts::SQRT_2))
        };
        prediction_sum += p;
        prediction_var += p * (1.0 - p);
    }
    let tail_frequency = exceed as f64 / trials as f64;
    let gaussian_prediction = prediction_sum / trials as f64;
    // Exact se of the paired difference: the trial indicators are Bernoulli
    // with the per-trial conditional probabilities.
    let std_error = (prediction_var).sqrt() / trials as f64;
    Ok(OrthogonalTailReport {
        tail_frequency,
        gaussian_prediction,
        threshold,
        std_error,
        satisfied: tail_frequency <= gaussian_prediction + 3.0 * std_error.max(1e-12),
        statistics,
        trials,
    })
}

/// Mean recovery error per corruption budget nu.
#[derive(Debug, Clone, Serialize)]
pub struct NoiseCurvePoint {
    pub nu: f64,
    pub mean_error: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoiseCurve {
    pub points: Vec<NoiseCurvePoint>,
    /// errors[trial][grid index]; trials are paired across nu.
    pub errors: Vec<Vec<f64>>,
    pub mu: f64,
}

/// Run the non-iterative estimator on nu-corrupted ensembles over an
/// ascending budget grid, reporting the mean error ||x_hat - mu x|| per nu.
/// Trials are paired: each trial reuses one ensemble across the whole grid,
/// so the nu = 0 column reproduces the uncorrupted experiment exactly.
#[allow(clippy::too_many_arguments)]
pub fn noise_budget_curve(
    model: &ObservationModel,
    gen: &Generator,
    x: &[f64],
    m: usize,
    nu_grid: &[f64],
    trials: usize,
    seed: u64,
    proj_cfg: &ProjectionConfig,
) -> Result<NoiseCurve> {
    if nu_grid.is_empty() {
        return Err(Error::Validation("nu grid must be non-empty".into()));
    }
    for w in nu_grid.windows(2) {
        if w[1] < w[0] {
            return Err(Error::Validation("nu grid must be ascending".into()));
        }
    }
    if nu_grid[0] < 0.0 {
        return Err(Error::Validation("nu must be nonnegative".into()));
    }
    let params = analytic_params(model.kind(), model.sigma())?;
    let target: Vec<f64> = x.iter().map(|v| params.mu * v).collect();
    let mut errors = Vec::with_capacity(trials);
    for trial in 0..trials {
        let t_seed = trial_seed(seed, trial as u64);
        let ens = sample_ensemble(x, m, model, t_seed)?;
        let mut row = Vec::with_capacity(nu_grid.len());
        for &nu in nu_grid {
            let corrupted = apply_bounded_corruption(&ens, nu, t_seed)?;
            let res = one_shot(&corrupted, gen, proj_cfg)?;
            row.push(linalg::norm2(&linalg::sub(&res.estimate, &target)));
        }
        errors.push(row);
    }
    let points = nu_grid
        .iter()
        .enumerate()
        .map(|(j, &nu)| {
            let col: Vec<f64> = errors.iter().map(|row| row[j]).collect();
            let mean = col.iter().sum::<f64>() / trials as f64;
            let var = col.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
                / (trials as f64 - 1.0).max(1.0);
            NoiseCurvePoint {
                nu,
                mean_error: mean,
                std_error: (var / trials as f64).sqrt(),
            }
        })
        .collect();
    Ok(NoiseCurve {
        points,
        errors,
        mu: params.mu,
    })
}

impl NoiseCurve {
    /// Number of adjacent mean-error inversions (decreases).
    pub fn mean_inversions(&self) -> usize {
        self.points
            .windows(2)
            .filter(|w| w[1].mean_error < w[0].mean_error)
            .count()
    }

    /// Per-trial quadratic fits err(nu) = a + b nu + c nu^2; returns the
    /// mean curvature coefficient and its standard error across trials.
    pub fn curvature_t_statistics(&self) -> Result<(f64, f64)> {
        let grid: Vec<f64> = self.points.iter().map(|p| p.nu).collect();
        if grid.len() < 3 {
            return Err(Error::Validation(
                "curvature fit needs at least 3 grid points".into(),
            ));
        }
        let row = curvature_row(&grid)?;
        let curvatures: Vec<f64> = self
            .errors
            .iter()
            .map(|errs| linalg::dot(&row, errs))
            .collect();
        let n = curvatures.len() as f64;
        let mean = curvatures.iter().sum::<f64>() / n;
        let var = curvatures.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>()
            / (n - 1.0).max(1.0);
        Ok((mean, (var / n).sqrt()))
    }
}

/// Row of the least-squares pseudo-inverse that extracts the quadratic
/// coefficient of a fit against [1, nu, nu^2].
fn curvature_row(grid: &[f64]) -> Result<Vec<f64>> {
    let n = grid.len();
    // Normal equations X^T X c = X^T e with X_{j.} = [1, nu_j, nu_j^2].
    let mut xtx = Matrix::zeros(3, 3);
    for &nu in grid {
        let basis = [1.0, nu, nu * nu];
        for i in 0..3 {
            for j in 0..3 {
                *xtx.at_mut(i, j) += basis[i] * basis[j];
            }
        }
    }
    let (evals, evecs) = linalg::sym_eigen(&xtx);
    let max_e = evals.iter().cloned().fold(0.0, f64::max);
    if max_e <= 0.0 || evals[0] <= 1e-12 * max_e {
        return Err(Error::Validation(
            "degenerate nu grid for the quadratic fit".into(),
        ));
    }
    // (X^T X)^{-1} applied to each design row, keeping the curvature entry.
    let mut row = vec![0.0; n];
    for (j, &nu) in grid.iter().enumerate() {
        let basis = [1.0, nu, nu * nu];
        // v = (X^T X)^{-1} basis
        let mut v = [0.0; 3];
        for (e, eval) in evals.iter().enumerate() {
            let dot_basis: f64 = (0..3).map(|i| evecs.at(i, e) * basis[i]).sum();
            let scale = dot_basis / eval;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi += scale * evecs.at(i, e);
            }
        }
        row[j] = v[2];
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{LatentBall, LinearGenerator};
    use crate::observation::random_unit_x;
    use crate::rng::Rng;

    #[test]
    fn event_e_one_bit_always_holds() {
        let model = ObservationModel::noisy_one_bit(0.7).unwrap();
        let x = random_unit_x(10, 1);
        let rep = event_e_frequency(&model, &x, 20, 50, 2).unwrap();
        assert_eq!(rep.frequency, 1.0);
        assert_eq!(rep.bound, 1.0);
        assert!(rep.satisfied);
    }

    #[test]
    fn event_e_identity_bound() {
        let model = ObservationModel::identity(0.0).unwrap();
        let x = random_unit_x(8, 3);
        let rep = event_e_frequency(&model, &x, 50, 400, 4).unwrap();
        assert!((rep.bound - 0.96).abs() < 1e-12);
        assert!(rep.satisfied, "freq {} vs bound {}", rep.frequency, rep.bound);
    }

    #[test]
    fn event_e_cubic_bound_value() {
        let model = ObservationModel::noisy_cubic(1.0).unwrap();
        let x = random_unit_x(12, 5);
        let rep = event_e_frequency(&model, &x, 200, 300, 6).unwrap();
        assert!((rep.bound - (1.0 - 10232.0 / 51200.0)).abs() < 1e-12);
        assert!(rep.satisfied, "freq {} vs bound {}", rep.frequency, rep.bound);
    }

    #[test]
    fn mu_hat_identity_bound() {
        let model = ObservationModel::identity(0.0).unwrap();
        let x = random_unit_x(10, 7);
        let rep = mu_hat_concentration(&model, &x, 100, 1.0, 500, 8).unwrap();
        assert!((rep.bound - 0.02).abs() < 1e-12);
        assert!(rep.satisfied);
        // Large t: no violations at all.
        let rep = mu_hat_concentration(&model, &x, 100, 1e9, 50, 9).unwrap();
        assert_eq!(rep.tail_frequency, 0.0);
    }

    #[test]
    fn mu_hat_cubic_bound_value() {
        let model = ObservationModel::noisy_cubic(1.0).unwrap();
        let x = random_unit_x(10, 10);
        let rep = mu_hat_concentration(&model, &x, 400, 2.0, 300, 11).unwrap();
        assert!((rep.bound - 97.0 / 1600.0).abs() < 1e-12);
        assert!(rep.satisfied, "tail {} vs bound {}", rep.tail_frequency, rep.bound);
    }

    #[test]
    fn projector_is_idempotent_and_symmetric() {
        let x = random_unit_x(6, 12);
        let p = orthogonal_complement_projector(&x);
        for i in 0..6 {
            for j in 0..6 {
                assert!((p.at(i, j) - p.at(j, i)).abs() <= 1e-15);
                let mut pij = 0.0;
                for k in 0..6 {
                    pij += p.at(i, k) * p.at(k, j);
                }
                assert!((pij - p.at(i, j)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn orthogonal_tail_probe_equal_x_never_exceeds() {
        let model = ObservationModel::noisy_one_bit(0.0).unwrap();
        let x = random_unit_x(8, 13);
        let rep = orthogonal_tail(&model, &x, &x, 40, 2.0, 60, 14).unwrap();
        assert_eq!(rep.tail_frequency, 0.0);
        assert_eq!(rep.gaussian_prediction, 0.0);
        for s in rep.statistics {
            assert!(s.abs() <= 1e-12);
        }
    }

    #[test]
    fn orthogonal_tail_matches_conditional_gaussian() {
        let model = ObservationModel::noisy_one_bit(0.0).unwrap();
        let n = 12;
        let x = random_unit_x(n, 15);
        // s orthogonal to x, unit norm.
        let mut rng = Rng::new(16);
        let mut s = rng.normal_vec(n);
        let a = linalg::dot(&s, &x);
        for (si, xi) in s.iter_mut().zip(&x) {
            *si -= a * xi;
        }
        let ns = linalg::norm2(&s);
        for si in s.iter_mut() {
            *si /= ns;
        }
        let m = 50;
        let rep = orthogonal_tail(&model, &x, &s, m, 4.0, 800, 17).unwrap();
        assert!((rep.threshold - 2.0 / (m as f64).sqrt()).abs() < 1e-12);
        // One-bit data: sum y^2 = m exactly, so the prediction is the same
        // for every trial; empirical frequency within 3 binomial se.
        let diff = (rep.tail_frequency - rep.gaussian_prediction).abs();
        let se = binomial_se(rep.gaussian_prediction, rep.trials).max(rep.std_error);
        assert!(diff <= 3.0 * se, "freq {} vs pred {}", rep.tail_frequency, rep.gaussian_prediction);
        assert!(rep.satisfied);
    }

    #[test]
    fn orthogonal_tail_statistic_scales_linearly() {
        let model = ObservationModel::noisy_cubic(0.5).unwrap();
        let x = random_unit_x(7, 18);
        let mut rng = Rng::new(19);
        let s = rng.normal_vec(7);
        let s2 = linalg::scale(&s, 2.0);
        let r1 = orthogonal_tail(&model, &x, &s, 30, 2.0, 40, 20).unwrap();
        let r2 = orthogonal_tail(&model, &x, &s2, 30, 2.0, 40, 20).unwrap();
        for (a, b) in r1.statistics.iter().zip(&r2.statistics) {
            assert!((2.0 * a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{a} {b}");
        }
    }

    fn small_linear_gen(n: usize, k: usize, r: f64, seed: u64) -> Generator {
        let mut rng = Rng::new(seed);
        let data: Vec<f64> = (0..n * k)
            .map(|_| rng.next_normal() / (n as f64).sqrt())
            .collect();
        Generator::Linear(
            LinearGenerator::new(Matrix::new(n, k, data), LatentBall::new(k, r).unwrap()).unwrap(),
        )
    }

    #[test]
    fn noise_curve_zero_budget_matches_uncorrupted() {
        let n = 30;
        let k = 3;
        let gen = small_linear_gen(n, k, 50.0, 21);
        // Ground truth inside the range for a meaningful curve.
        let lin = gen.as_linear().unwrap();
        let mut rng = Rng::new(22);
        let z0 = rng.normal_vec(k);
        let w0 = lin.matrix().matvec(&z0);
        let x = linalg::scale(&w0, 1.0 / linalg::norm2(&w0));
        let model = ObservationModel::noisy_cubic(1.0).unwrap();
        let cfg = ProjectionConfig::exact_linear();
        let curve =
            noise_budget_curve(&model, &gen, &x, 100, &[0.0, 0.2, 0.4], 40, 23, &cfg).unwrap();
        // nu = 0 column equals a direct uncorrupted run at the same seed.
        let ens = sample_ensemble(&x, 100, &model, trial_seed(23, 0)).unwrap();
        let res = one_shot(&ens, &gen, &cfg).unwrap();
        let target = linalg::scale(&x, curve.mu);
        let direct = linalg::norm2(&linalg::sub(&res.estimate, &target));
        assert!((curve.errors[0][0] - direct).abs() <= 1e-12);
        // Means are non-decreasing on average for this well-posed setup.
        assert!(curve.mean_inversions() <= 1);
    }

    #[test]
    fn noise_curve_dominated_by_linear_growth() {
        // err(nu) <= err(0) + C nu with C the chord coefficient (convex
        // curves lie below their chords), and an OLS line fits the curve
        // with small residuals.
        let n = 100;
        let k = 5;
        let gen = small_linear_gen(n, k, 50.0, 31);
        let lin = gen.as_linear().unwrap();
        let mut rng = Rng::new(32);
        let z0 = rng.normal_vec(k);
        let w0 = lin.matrix().matvec(&z0);
        let x = linalg::scale(&w0, 1.0 / linalg::norm2(&w0));
        let model = ObservationModel::noisy_cubic(1.0).unwrap();
        let grid = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
        let curve = noise_budget_curve(
            &model,
            &gen,
            &x,
            800,
            &grid,
            40,
            33,
            &ProjectionConfig::exact_linear(),
        )
        .unwrap();
        let errs: Vec<f64> = curve.points.iter().map(|p| p.mean_error).collect();
        let rise = errs[5] - errs[0];
        assert!(rise > 0.0, "curve must rise: {errs:?}");
        let chord = rise / 0.5;
        for (j, &nu) in grid.iter().enumerate() {
            let bound = errs[0] + chord * nu + 3.0 * curve.points[j].std_error;
            assert!(errs[j] <= bound, "err({nu}) = {} above {bound}", errs[j]);
        }
        // OLS line through the six means: residuals small vs the rise.
        let xbar = grid.iter().sum::<f64>() / 6.0;
        let ybar = errs.iter().sum::<f64>() / 6.0;
        let sxx: f64 = grid.iter().map(|x| (x - xbar) * (x - xbar)).sum();
        let sxy: f64 = grid.iter().zip(&errs).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
        let slope = sxy / sxx;
        let intercept = ybar - slope * xbar;
        for (j, &nu) in grid.iter().enumerate() {
            let resid = (errs[j] - slope * nu - intercept).abs();
            assert!(resid <= 0.15 * rise, "residual {resid} vs rise {rise}");
        }
    }

    #[test]
    fn curvature_row_extracts_quadratic_coefficient() {
        let grid = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
        let row = curvature_row(&grid).unwrap();
        // Exact quadratic data: curvature recovered exactly.
        let quad_data: Vec<f64> = grid.iter().map(|&nu| 1.5 - 0.3 * nu + 2.25 * nu * nu).collect();
        let c = linalg::dot(&row, &quad_data);
        assert!((c - 2.25).abs() < 1e-9, "c = {c}");
        // Linear data: zero curvature.
        let lin: Vec<f64> = grid.iter().map(|&nu| 0.7 + 1.1 * nu).collect();
        let c = linalg::dot(&row, &lin);
        assert!(c.abs() < 1e-9, "c = {c}");
    }

    #[test]
    fn config_validation() {
        let cfg = DiagnosticsConfig {
            trials: 10,
            m: 100,
            t: 1.0,
            epsilon: 2.0,
            delta: 0.01,
            probe_s: None,
        };
        assert!(cfg.validate().is_err());
        let cfg = DiagnosticsConfig {
            trials: 100,
            m: 100,
            t: 1.0,
            epsilon: 2.0,
            delta: 0.01,
            probe_s: None,
        };
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn theoretical_scale_decreases_in_m() {
        let p = analytic_params(crate::observation::ModelKind::NoisyCubic, 1.0).unwrap();
        let a = theoretical_error_scale(&p, 10, 3.0, 2.0, 100, DEFAULT_DELTA);
        let b = theoretical_error_scale(&p, 10, 3.0, 2.0, 400, DEFAULT_DELTA);
        assert!((a / b - 2.0).abs() < 1e-12);
    }
}
