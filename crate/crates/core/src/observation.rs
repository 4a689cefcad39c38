//! Single-index-model observations y_i = f(<a_i, x>) with Gaussian
//! measurement ensembles, and the characterization parameters of the
//! nonlinearity f for a standard normal input g:
//!
//!   mu      = E[f(g) g]
//!   xi^2    = E[f(g)^2]
//!   rho^2   = Var[f(g) g]
//!   theta^4 = Var[f(g)^2]
//!
//! The parameters are computed analytically where closed forms exist, by
//! Gauss-Hermite quadrature composed with analytic noise moments, or by
//! Monte Carlo with reported standard errors.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::quadrature::{GaussHermite, DEFAULT_ORDER};
use crate::rng::{self, stream, Rng};

/// sign with sign(0) = 0.
///
/// The convention is shared across the whole crate; it makes the first
/// iterate of the binary iterative baseline from x = 0 coincide exactly
/// with the non-iterative estimator.
#[inline]
pub fn sign0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Scalar map applied to the inner product; second argument is a standard
/// normal noise draw supplied by the sampler.
pub type CustomFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// y = g + sigma * eps
    Identity,
    /// y = sign(g + sigma * eps), sign(0) = 0
    NoisyOneBit,
    /// y = g^3 + sigma * eps
    NoisyCubic,
    /// y = sign(<a, x + e>) with per-row perturbation e ~ N(0, (sigma^2/n) I)
    OneBitSignalNoise,
    /// y = <a, x + e>^3 with the same perturbation law
    CubicSignalNoise,
    /// User-supplied scalar map
    Custom,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Identity => "identity",
            ModelKind::NoisyOneBit => "noisy_one_bit",
            ModelKind::NoisyCubic => "noisy_cubic",
            ModelKind::OneBitSignalNoise => "one_bit_signal_noise",
            ModelKind::CubicSignalNoise => "cubic_signal_noise",
            ModelKind::Custom => "custom",
        }
    }

    /// Kinds whose observations enter through sign(.) and are +/-1-valued.
    pub fn is_one_bit(&self) -> bool {
        matches!(self, ModelKind::NoisyOneBit | ModelKind::OneBitSignalNoise)
    }

    /// Kinds where the noise perturbs the signal inside the inner product.
    pub fn is_signal_noise(&self) -> bool {
        matches!(
            self,
            ModelKind::OneBitSignalNoise | ModelKind::CubicSignalNoise
        )
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A SIM nonlinearity specification: kind plus noise level sigma.
#[derive(Clone)]
pub struct ObservationModel {
    kind: ModelKind,
    sigma: f64,
    custom: Option<CustomFn>,
}

impl fmt::Debug for ObservationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObservationModel")
            .field("kind", &self.kind)
            .field("sigma", &self.sigma)
            .field("custom", &self.custom.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl ObservationModel {
    pub fn new(kind: ModelKind, sigma: f64) -> Result<Self> {
        if kind == ModelKind::Custom {
            return Err(Error::Validation(
                "custom models are built with ObservationModel::custom".into(),
            ));
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::Validation(format!(
                "sigma must be a nonnegative finite real, got {sigma}"
            )));
        }
        Ok(ObservationModel {
            kind,
            sigma,
            custom: None,
        })
    }

    pub fn identity(sigma: f64) -> Result<Self> {
        Self::new(ModelKind::Identity, sigma)
    }

    pub fn noisy_one_bit(sigma: f64) -> Result<Self> {
        Self::new(ModelKind::NoisyOneBit, sigma)
    }

    pub fn noisy_cubic(sigma: f64) -> Result<Self> {
        Self::new(ModelKind::NoisyCubic, sigma)
    }

    pub fn one_bit_signal_noise(sigma: f64) -> Result<Self> {
        Self::new(ModelKind::OneBitSignalNoise, sigma)
    }

    pub fn cubic_signal_noise(sigma: f64) -> Result<Self> {
        Self::new(ModelKind::CubicSignalNoise, sigma)
    }

    /// Custom scalar map, validated at construction: |E[f(g)g]| must exceed
    /// 3 Monte Carlo standard errors, and the empirical fourth moment must
    /// be finite and stabilize across doubling sample sizes.
    pub fn custom(f: CustomFn) -> Result<Self> {
        let model = Self::custom_unchecked(f);
        let report = validate_sim_assumptions(&model, 0x5eed_cafe)?;
        if !report.mu_nonzero {
            return Err(Error::Validation(format!(
                "custom map fails the E[f(g)g] != 0 check: mu_hat = {:.4e} within 3 standard errors ({:.4e}) of zero",
                report.mu_hat, report.mu_std_error
            )));
        }
        if !report.fourth_moment_stable {
            return Err(Error::Validation(
                "custom map fails the bounded fourth-moment check".into(),
            ));
        }
        Ok(model)
    }

    /// Custom map without the construction-time checks; used to run the
    /// assumption diagnostics on maps that are expected to fail them.
    pub fn custom_unchecked(f: CustomFn) -> Self {
        ObservationModel {
            kind: ModelKind::Custom,
            sigma: 0.0,
            custom: Some(f),
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Apply the scalar nonlinearity to an inner product g, drawing any
    /// noise it needs from `rng`. Signal-noise kinds are not scalar maps
    /// and are rejected.
    pub fn apply(&self, g: f64, rng: &mut Rng) -> Result<f64> {
        let eps = rng.next_normal();
        Ok(match self.kind {
            ModelKind::Identity => g + self.sigma * eps,
            ModelKind::NoisyOneBit => sign0(g + self.sigma * eps),
            ModelKind::NoisyCubic => g * g * g + self.sigma * eps,
            ModelKind::Custom => (self.custom.as_ref().unwrap())(g, eps),
            ModelKind::OneBitSignalNoise | ModelKind::CubicSignalNoise => {
                return Err(Error::Validation(format!(
                    "kind '{}' perturbs the signal vector; use sample_adversarial_ensemble",
                    self.kind
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamMethod {
    Analytic,
    Quadrature,
    MonteCarlo,
}

impl ParamMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ParamMethod::Analytic => "analytic",
            ParamMethod::Quadrature => "quadrature",
            ParamMethod::MonteCarlo => "monte_carlo",
        }
    }
}

/// Per-parameter standard errors of a Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamStdErrors {
    pub mu: f64,
    pub xi_sq: f64,
    pub rho_sq: f64,
    pub theta_4: f64,
}

/// The characterization quadruple (mu, xi^2, rho^2, theta^4).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParameters {
    pub mu: f64,
    pub xi_sq: f64,
    pub rho_sq: f64,
    pub theta_4: f64,
    pub method: ParamMethod,
    pub std_errors: Option<ParamStdErrors>,
}

impl SimParameters {
    /// Invariants: xi^2 > 0, rho^2 >= 0, theta^4 >= 0, and the
    /// Cauchy-Schwarz relation mu^2 <= xi^2 E[g^2]. For exact methods
    /// E[g^2] = 1; Monte Carlo estimates satisfy the sample version with
    /// the sample mean of g^2, which the caller passes in.
    fn validated(mut self, g2: f64) -> Result<Self> {
        // Tiny negatives from exact cancellation (e.g. theta^4 = 0 for sign
        // models under quadrature) are clamped.
        for v in [&mut self.rho_sq, &mut self.theta_4] {
            if *v < 0.0 && *v > -1e-9 {
                *v = 0.0;
            }
        }
        if self.xi_sq.is_nan() || self.xi_sq <= 0.0 {
            return Err(Error::Numerical(format!(
                "xi^2 must be positive, got {}",
                self.xi_sq
            )));
        }
        if self.rho_sq < 0.0 || self.theta_4 < 0.0 {
            return Err(Error::Numerical(format!(
                "negative variance parameter: rho^2 = {}, theta^4 = {}",
                self.rho_sq, self.theta_4
            )));
        }
        if self.mu * self.mu > self.xi_sq * g2 * (1.0 + 1e-12) {
            return Err(Error::Numerical(format!(
                "Cauchy-Schwarz violated: mu^2 = {} > xi^2 * E[g^2] = {}",
                self.mu * self.mu,
                self.xi_sq * g2
            )));
        }
        Ok(self)
    }
}

/// Closed forms for the supported kinds.
pub fn analytic_params(kind: ModelKind, sigma: f64) -> Result<SimParameters> {
    use std::f64::consts::PI;
    let s2 = sigma * sigma;
    let (mu, xi_sq, rho_sq, theta_4) = match kind {
        ModelKind::Identity => (1.0, 1.0 + s2, 2.0 + s2, 2.0 * (1.0 + s2) * (1.0 + s2)),
        ModelKind::NoisyOneBit => {
            let q = 2.0 / (PI * (1.0 + s2));
            (q.sqrt(), 1.0, 1.0 - q, 0.0)
        }
        ModelKind::NoisyCubic => (
            3.0,
            15.0 + s2,
            96.0 + s2,
            10170.0 + 60.0 * s2 + 2.0 * s2 * s2,
        ),
        other => {
            return Err(Error::NoClosedForm {
                kind: other.name().into(),
                method: "analytic".into(),
            })
        }
    };
    SimParameters {
        mu,
        xi_sq,
        rho_sq,
        theta_4,
        method: ParamMethod::Analytic,
        std_errors: None,
    }
    .validated(1.0)
}

/// Conditional moment of f given g, taken over the noise.
type MomentFn = Box<dyn Fn(f64) -> f64>;

/// Gauss-Hermite quadrature for the g-integral composed with analytic
/// moments of the additive noise. m_j(g) below is E[f(g)^j | g] taken over
/// the noise.
pub fn quadrature_params(kind: ModelKind, sigma: f64, order: usize) -> Result<SimParameters> {
    let order = order.max(DEFAULT_ORDER);
    let q = GaussHermite::new(order)?;
    let s2 = sigma * sigma;
    let (m1, m2, m4): (MomentFn, MomentFn, MomentFn) = match kind {
        ModelKind::Identity => (
            Box::new(|g| g),
            Box::new(move |g| g * g + s2),
            Box::new(move |g| {
                let g2 = g * g;
                g2 * g2 + 6.0 * g2 * s2 + 3.0 * s2 * s2
            }),
        ),
        ModelKind::NoisyOneBit => {
            let m1: MomentFn = if sigma > 0.0 {
                Box::new(move |g| libm::erf(g / (sigma * std::f64::consts::SQRT_2)))
            } else {
                Box::new(sign0)
            };
            (m1, Box::new(|_| 1.0), Box::new(|_| 1.0))
        }
        ModelKind::NoisyCubic => (
            Box::new(|g| g * g * g),
            Box::new(move |g| g.powi(6) + s2),
            Box::new(move |g| g.powi(12) + 6.0 * g.powi(6) * s2 + 3.0 * s2 * s2),
        ),
        other => {
            return Err(Error::NoClosedForm {
                kind: other.name().into(),
                method: "quadrature".into(),
            })
        }
    };
    let mu = q.gaussian_expectation(|g| g * m1(g));
    let xi_sq = q.gaussian_expectation(&*m2);
    let second_with_g2 = q.gaussian_expectation(|g| g * g * m2(g));
    let fourth = q.gaussian_expectation(&*m4);
    SimParameters {
        mu,
        xi_sq,
        rho_sq: second_with_g2 - mu * mu,
        theta_4: fourth - xi_sq * xi_sq,
        method: ParamMethod::Quadrature,
        std_errors: None,
    }
    .validated(1.0)
}

/// Monte Carlo estimates from `samples` draws of (g, noise), with
/// asymptotic standard errors for each parameter.
pub fn monte_carlo_params(model: &ObservationModel, samples: usize, seed: u64) -> Result<SimParameters> {
    if model.kind().is_signal_noise() {
        return Err(Error::NoClosedForm {
            kind: model.kind().name().into(),
            method: "monte_carlo (parameters depend on the ambient dimension)".into(),
        });
    }
    if samples < 2 {
        return Err(Error::Validation("monte_carlo needs samples >= 2".into()));
    }
    let mut rng = Rng::from_tag(seed, stream::PARAMS);
    let n = samples;
    let mut fg = Vec::with_capacity(n);
    let mut fsq = Vec::with_capacity(n);
    let mut g2_sum = 0.0;
    for _ in 0..n {
        let g = rng.next_normal();
        let y = model.apply(g, &mut rng)?;
        if !y.is_finite() {
            return Err(Error::Numerical("custom map produced a non-finite value".into()));
        }
        fg.push(y * g);
        fsq.push(y * y);
        g2_sum += g * g;
    }
    let (mu, mu_se) = mean_with_se(&fg);
    let (xi_sq, xi_se) = mean_with_se(&fsq);
    let (rho_sq, rho_se) = variance_with_se(&fg);
    let (theta_4, theta_se) = variance_with_se(&fsq);
    SimParameters {
        mu,
        xi_sq,
        rho_sq,
        theta_4,
        method: ParamMethod::MonteCarlo,
        std_errors: Some(ParamStdErrors {
            mu: mu_se,
            xi_sq: xi_se,
            rho_sq: rho_se,
            theta_4: theta_se,
        }),
    }
    .validated(g2_sum / n as f64)
}

/// Dispatch over the estimation method.
pub fn sim_parameters(
    model: &ObservationModel,
    method: ParamMethod,
    samples: usize,
    seed: u64,
) -> Result<SimParameters> {
    match method {
        ParamMethod::Analytic => analytic_params(model.kind(), model.sigma()),
        ParamMethod::Quadrature => quadrature_params(model.kind(), model.sigma(), DEFAULT_ORDER),
        ParamMethod::MonteCarlo => monte_carlo_params(model, samples, seed),
    }
}

fn mean_with_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample variance with its asymptotic standard error
/// sqrt((m4 - s^4) / n), m4 the fourth central moment.
fn variance_with_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for x in v {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    let var = m2 * n / (n - 1.0);
    let se_sq = (m4 - m2 * m2).max(0.0) / n;
    (var, se_sq.sqrt())
}

/// Ground-truth direction, measurement matrix, observations, and the seed
/// that produced them.
#[derive(Debug, Clone)]
pub struct MeasurementEnsemble {
    pub x: Vec<f64>,
    pub a: Matrix,
    pub y: Vec<f64>,
    pub seed: u64,
    pub model: ObservationModel,
}

impl MeasurementEnsemble {
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }
}

const UNIT_NORM_TOL: f64 = 1e-10;

fn check_inputs(x: &[f64], m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Validation("measurement count m must be >= 1".into()));
    }
    let norm = linalg::norm2(x);
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::Validation(format!(
            "ground-truth direction must be unit norm (||x|| = {norm})"
        )));
    }
    Ok(())
}

/// Draw A with i.i.d. N(0,1) entries and y_i = f_i(<a_i, x>) with fresh
/// noise per row. The matrix and the noise live on independent named
/// streams derived from `seed`, so identical inputs reproduce the ensemble
/// bit-for-bit and models with the same seed share the same matrix.
pub fn sample_ensemble(
    x: &[f64],
    m: usize,
    model: &ObservationModel,
    seed: u64,
) -> Result<MeasurementEnsemble> {
    check_inputs(x, m)?;
    if model.kind().is_signal_noise() {
        return Err(Error::Validation(format!(
            "kind '{}' is sampled with sample_adversarial_ensemble",
            model.kind()
        )));
    }
    let n = x.len();
    let mut mat_rng = Rng::from_tag(seed, stream::MATRIX);
    let mut a = Matrix::zeros(m, n);
    mat_rng.fill_normal(a.data_mut());
    let mut noise_rng = Rng::from_tag(seed, stream::NOISE);
    let mut y = Vec::with_capacity(m);
    for i in 0..m {
        let g = linalg::dot(a.row(i), x);
        y.push(model.apply(g, &mut noise_rng)?);
    }
    Ok(MeasurementEnsemble {
        x: x.to_vec(),
        a,
        y,
        seed,
        model: model.clone(),
    })
}

/// Signal-perturbation variants: y_i = sign(<a_i, x + e_i>) or
/// y_i = <a_i, x + e_i>^3, with per-row i.i.d. perturbation vectors
/// e_i ~ N(0, (sigma^2 / n) I_n), so E||e_i||^2 = sigma^2 and the inner
/// product <a_i, x + e_i> has variance 1 + sigma^2 for unit x.
pub fn sample_adversarial_ensemble(
    x: &[f64],
    m: usize,
    model: &ObservationModel,
    seed: u64,
) -> Result<MeasurementEnsemble> {
    check_inputs(x, m)?;
    if !model.kind().is_signal_noise() {
        return Err(Error::Validation(format!(
            "sample_adversarial_ensemble requires a signal-noise kind, got '{}'",
            model.kind()
        )));
    }
    let n = x.len();
    let mut mat_rng = Rng::from_tag(seed, stream::MATRIX);
    let mut a = Matrix::zeros(m, n);
    mat_rng.fill_normal(a.data_mut());
    let mut noise_rng = Rng::from_tag(seed, stream::NOISE);
    let per_coord = model.sigma() / (n as f64).sqrt();
    let mut y = Vec::with_capacity(m);
    let mut perturbed = vec![0.0; n];
    for i in 0..m {
        for (p, xj) in perturbed.iter_mut().zip(x) {
            *p = xj + per_coord * noise_rng.next_normal();
        }
        let g = linalg::dot(a.row(i), &perturbed);
        y.push(match model.kind() {
            ModelKind::OneBitSignalNoise => sign0(g),
            ModelKind::CubicSignalNoise => g * g * g,
            _ => unreachable!(),
        });
    }
    Ok(MeasurementEnsemble {
        x: x.to_vec(),
        a,
        y,
        seed,
        model: model.clone(),
    })
}

/// Replace y by y + c with ||c||_2 = nu * sqrt(m) exactly, binding the
/// corruption budget (1/sqrt(m)) ||y' - y||_2 <= nu with equality.
///
/// The direction is a deterministic adversary: the sign pattern of y,
/// scaled (all-ones if y is identically zero). The seed parameter is
/// reserved for randomized adversaries and is unused by this one.
pub fn apply_bounded_corruption(
    ensemble: &MeasurementEnsemble,
    nu: f64,
    _seed: u64,
) -> Result<MeasurementEnsemble> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::Validation(format!(
            "corruption budget nu must be nonnegative, got {nu}"
        )));
    }
    let m = ensemble.m();
    let mut dir: Vec<f64> = ensemble.y.iter().map(|&v| sign0(v)).collect();
    if dir.iter().all(|&d| d == 0.0) {
        dir = vec![1.0; m];
    }
    let scale = nu * (m as f64).sqrt() / linalg::norm2(&dir);
    let mut out = ensemble.clone();
    for (yi, di) in out.y.iter_mut().zip(&dir) {
        *yi += scale * di;
    }
    Ok(out)
}

/// Report of the two model preconditions: mu != 0 and finite E[f(g)^4].
#[derive(Debug, Clone, Serialize)]
pub struct SimAssumptionReport {
    pub mu_hat: f64,
    pub mu_std_error: f64,
    /// |mu_hat| exceeds 3 standard errors.
    pub mu_nonzero: bool,
    /// Empirical fourth moment at doubling sample sizes.
    pub fourth_moment_levels: Vec<(usize, f64)>,
    /// Last doubling step moved the estimate by less than 3 combined
    /// standard errors (finite-fourth-moment heuristic).
    pub fourth_moment_stable: bool,
    pub passed: bool,
}

/// Check the preconditions on the nonlinearity empirically: whether
/// |mu_hat| exceeds 3 standard errors, and whether the empirical fourth
/// moment stabilizes across doubling sample sizes.
pub fn validate_sim_assumptions(model: &ObservationModel, seed: u64) -> Result<SimAssumptionReport> {
    if model.kind().is_signal_noise() {
        return Err(Error::NoClosedForm {
            kind: model.kind().name().into(),
            method: "validate_sim_assumptions (scalar reduction undefined)".into(),
        });
    }
    let mut rng = Rng::from_tag(seed, stream::PARAMS);
    let total = 200_000usize;
    let mut fg = Vec::with_capacity(total);
    let mut f4 = Vec::with_capacity(total);
    for _ in 0..total {
        let g = rng.next_normal();
        let y = model.apply(g, &mut rng)?;
        fg.push(y * g);
        f4.push(y * y * y * y);
    }
    let (mu_hat, mu_se) = mean_with_se(&fg);
    let mu_nonzero = mu_hat.abs() > 3.0 * mu_se;

    let mut levels = Vec::new();
    let mut size = total / 8;
    let mut stable = true;
    let mut prev: Option<(f64, f64)> = None;
    while size <= total {
        let (m4, se) = mean_with_se(&f4[..size]);
        levels.push((size, m4));
        if !m4.is_finite() {
            stable = false;
        }
        if size == total {
            if let Some((pm, pse)) = prev {
                if (m4 - pm).abs() > 3.0 * (se + pse) {
                    stable = false;
                }
            }
        }
        prev = Some((m4, se));
        size *= 2;
    }
    let passed = mu_nonzero && stable;
    Ok(SimAssumptionReport {
        mu_hat,
        mu_std_error: mu_se,
        mu_nonzero,
        fourth_moment_levels: levels,
        fourth_moment_stable: stable,
        passed,
    })
}

// ---- Ensemble serialization (results-store format) ----

#[derive(Serialize, Deserialize)]
struct EnsembleFile {
    model_kind: ModelKind,
    sigma: f64,
    seed: u64,
    x: Vec<f64>,
    y: Vec<f64>,
    a: Vec<Vec<f64>>,
}

impl MeasurementEnsemble {
    pub fn to_json(&self) -> Result<String> {
        if self.model.kind() == ModelKind::Custom {
            return Err(Error::Validation(
                "ensembles with custom models are not serializable".into(),
            ));
        }
        let file = EnsembleFile {
            model_kind: self.model.kind(),
            sigma: self.model.sigma(),
            seed: self.seed,
            x: self.x.clone(),
            y: self.y.clone(),
            a: self.a.to_rows(),
        };
        serde_json::to_string_pretty(&file).map_err(|e| Error::Parse {
            path: "<ensemble>".into(),
            detail: e.to_string(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: EnsembleFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: "<ensemble>".into(),
            detail: e.to_string(),
        })?;
        let a = Matrix::from_rows(&file.a)?;
        if file.y.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                context: "ensemble observations".into(),
                expected: a.rows(),
                actual: file.y.len(),
            });
        }
        if file.x.len() != a.cols() {
            return Err(Error::DimensionMismatch {
                context: "ensemble ground truth".into(),
                expected: a.cols(),
                actual: file.x.len(),
            });
        }
        Ok(MeasurementEnsemble {
            x: file.x,
            a,
            y: file.y,
            seed: file.seed,
            model: ObservationModel::new(file.model_kind, file.sigma)?,
        })
    }
}

/// Unit vector along the first coordinate axis; handy for tests and the CLI.
pub fn unit_x(n: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[0] = 1.0;
    x
}

/// Random unit direction drawn from the TRUTH stream of `seed`.
pub fn random_unit_x(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = Rng::from_tag(seed, stream::TRUTH);
    loop {
        let v = rng.normal_vec(n);
        let norm = linalg::norm2(&v);
        if norm > 1e-12 {
            return linalg::scale(&v, 1.0 / norm);
        }
    }
}

/// Derived per-trial seed used by diagnostics and harness loops.
pub fn trial_seed(base_seed: u64, trial: u64) -> u64 {
    rng::derive(base_seed, stream::TRIAL.wrapping_add(trial << 8))
}
