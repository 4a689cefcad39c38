//! Recovery scores and empirical rate fits.
//!
//! Direction recovery is scored by cosine similarity (scale invariant by
//! construction, matching the fact that only the direction of the signal
//! is identifiable) and by the distance to the scaled target mu * x.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Scores for one recovery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    /// <x, v / ||v||>, in [-1, 1].
    pub cosine: f64,
    /// ||v - mu x||_2.
    pub l2_to_mux: f64,
    /// ||v - P_G(mu x)||_2 in the representation-error setting.
    pub l2_to_projected_target: Option<f64>,
}

impl ScoreRecord {
    pub fn compute(
        x: &[f64],
        mu: f64,
        estimate: &[f64],
        projected_target: Option<&[f64]>,
    ) -> Result<Self> {
        let cosine = cosine_similarity(x, estimate)?;
        if cosine.is_nan() || cosine.abs() > 1.0 + 1e-12 {
            return Err(Error::Numerical(format!("cosine out of range: {cosine}")));
        }
        let l2_to_mux = error_to_scaled_target(estimate, x, mu);
        let l2_to_projected_target =
            projected_target.map(|t| linalg::norm2(&linalg::sub(estimate, t)));
        Ok(ScoreRecord {
            cosine,
            l2_to_mux,
            l2_to_projected_target,
        })
    }
}

/// Inner product between the unit ground-truth direction and the normalized
/// estimate. Errors on a zero estimate (no direction information).
pub fn cosine_similarity(x: &[f64], v: &[f64]) -> Result<f64> {
    if x.len() != v.len() {
        return Err(Error::DimensionMismatch {
            context: "cosine_similarity".into(),
            expected: x.len(),
            actual: v.len(),
        });
    }
    let norm = linalg::norm2(v);
    if norm == 0.0 {
        return Err(Error::Validation(
            "cosine similarity undefined for the zero vector".into(),
        ));
    }
    Ok(linalg::dot(x, v) / norm)
}

/// ||v - mu x||_2.
pub fn error_to_scaled_target(v: &[f64], x: &[f64], mu: f64) -> f64 {
    debug_assert_eq!(v.len(), x.len());
    v.iter()
        .zip(x)
        .map(|(vi, xi)| {
            let d = vi - mu * xi;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Ordinary least squares on (log m, log err).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_std_error: f64,
}

/// Fit log err = slope * log m + intercept. Requires at least 3 points with
/// distinct m and positive finite errors.
pub fn fit_rate_slope(points: &[(usize, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::Validation(format!(
            "rate fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let mut ms: Vec<usize> = points.iter().map(|p| p.0).collect();
    ms.sort_unstable();
    ms.dedup();
    if ms.len() != points.len() {
        return Err(Error::Validation("rate fit needs distinct m values".into()));
    }
    for &(m, err) in points {
        if m == 0 || !err.is_finite() || err <= 0.0 {
            return Err(Error::Validation(format!(
                "rate fit needs positive finite errors at positive m, got ({m}, {err})"
            )));
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let pred = slope * x + intercept;
            (y - pred) * (y - pred)
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar) * (y - ybar)).sum();
    let r_squared = if ss_tot <= 1e-300 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    let dof = (n - 2.0).max(1.0);
    let slope_std_error = (ss_res / dof / sxx).sqrt();
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        slope_std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_basics() {
        let x = [1.0, 0.0];
        assert_eq!(cosine_similarity(&x, &[2.0, 0.0]).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&x, &[-1.0, 0.0]).unwrap(), -1.0);
        assert_eq!(cosine_similarity(&x, &[0.0, 5.0]).unwrap(), 0.0);
        assert!(cosine_similarity(&x, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn error_to_target_basics() {
        let x = [1.0, 0.0, 0.0];
        assert_eq!(error_to_scaled_target(&[2.0, 0.0, 0.0], &x, 2.0), 0.0);
        assert_eq!(error_to_scaled_target(&[0.0, 0.0, 0.0], &x, -3.0), 3.0);
        let v = [0.3, -0.4, 1.2];
        let mu = 1.7f64;
        let direct = ((v[0] - mu).powi(2) + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!((error_to_scaled_target(&v, &x, mu) - direct).abs() < 1e-15);
    }

    #[test]
    fn exact_power_law_recovers_slope() {
        let points: Vec<(usize, f64)> = [100usize, 200, 400, 800, 1600]
            .iter()
            .map(|&m| (m, 3.0 / (m as f64).sqrt()))
            .collect();
        let fit = fit_rate_slope(&points).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_errors_give_zero_slope() {
        let points: Vec<(usize, f64)> = [10usize, 100, 1000].iter().map(|&m| (m, 2.5)).collect();
        let fit = fit_rate_slope(&points).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn noisy_power_law_within_ci() {
        use crate::rng::Rng;
        let mut rng = Rng::new(6);
        let planted = -0.73;
        let points: Vec<(usize, f64)> = [50usize, 100, 200, 400, 800, 1600, 3200]
            .iter()
            .map(|&m| {
                let noise = (0.05 * rng.next_normal()).exp();
                (m, 2.0 * (m as f64).powf(planted) * noise)
            })
            .collect();
        let fit = fit_rate_slope(&points).unwrap();
        assert!(
            (fit.slope - planted).abs() <= 3.0 * fit.slope_std_error,
            "slope {} +/- {} vs planted {planted}",
            fit.slope,
            fit.slope_std_error
        );
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(fit_rate_slope(&[(10, 1.0), (20, 0.5)]).is_err());
        assert!(fit_rate_slope(&[(10, 1.0), (10, 0.5), (20, 0.2)]).is_err());
        assert!(fit_rate_slope(&[(10, 1.0), (20, -0.5), (30, 0.2)]).is_err());
    }

    #[test]
    fn score_record_with_projected_target() {
        let x = [1.0, 0.0];
        let rec = ScoreRecord::compute(&x, 2.0, &[2.0, 1.0], Some(&[2.0, 0.5])).unwrap();
        assert!((rec.l2_to_mux - 1.0).abs() < 1e-15);
        assert!((rec.l2_to_projected_target.unwrap() - 0.5).abs() < 1e-15);
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn cosine_scale_invariant(alpha in 1e-6f64..1e6, vx in -10.0f64..10.0, vy in -10.0f64..10.0) {
            prop_assume!(vx.abs() + vy.abs() > 1e-9);
            let x = [0.6, 0.8];
            let v = [vx, vy];
            let scaled = [alpha * vx, alpha * vy];
            let a = cosine_similarity(&x, &v).unwrap();
            let b = cosine_similarity(&x, &scaled).unwrap();
            prop_assert!((a - b).abs() <= 1e-9);
        }

        #[test]
        fn slope_invariant_to_error_scaling(c in 0.001f64..1000.0) {
            let base: Vec<(usize, f64)> = vec![(100, 0.9), (200, 0.62), (400, 0.48), (800, 0.31)];
            let scaled: Vec<(usize, f64)> = base.iter().map(|&(m, e)| (m, c * e)).collect();
            let f1 = fit_rate_slope(&base).unwrap();
            let f2 = fit_rate_slope(&scaled).unwrap();
            prop_assert!((f1.slope - f2.slope).abs() <= 1e-9);
        }
    }
}
