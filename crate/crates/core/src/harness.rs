//! Experiment orchestration: sweep configs, deterministic seeded execution
//! over (sigma, m, trial, estimator) grids, CSV persistence, rate studies,
//! and plot-data emission.
//!
//! Determinism contract: identical (config, base_seed) produce identical
//! result rows except for the runtime column. Cells run in a work pool
//! (thread count from `GENREC_THREADS`, default all cores); rows are
//! written in canonical grid order regardless of scheduling and flushed
//! incrementally.
//!
//! Seed scheme (see `rng` for the mixing function):
//!   cell_seed = derive(base_seed, ((sigma_idx * |m_grid| + m_idx) * trials + trial))
//!   ground truth stream = derive(cell_seed, TRUTH)
//!   estimator run seed  = derive(derive(cell_seed, ESTIMATOR), estimator_idx)
//! The run seed doubles as the projection restart seed and is echoed in the
//! row, making the derivation injective across the whole grid.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{theoretical_error_scale, DEFAULT_DELTA};
use crate::error::{Error, Result};
use crate::estimators::{run_estimator, EstimatorKind, EstimatorSpec, RecoveryResult};
use crate::generators::{
    load_generator, Activation, DomainMode, Generator, LatentBall, LinearGenerator, MlpGenerator,
    MlpLayer,
};
use crate::linalg::{self, Matrix};
use crate::metrics::{cosine_similarity, error_to_scaled_target, fit_rate_slope, RateFit};
use crate::observation::{
    analytic_params, sample_adversarial_ensemble, sample_ensemble, MeasurementEnsemble, ModelKind,
    ObservationModel,
};
use crate::projection::ExactLinearProjector;
use crate::rng::{derive, stream, Rng};

/// Environment variable controlling the sweep work-pool size.
pub const THREADS_ENV: &str = "GENREC_THREADS";

/// How the ground-truth direction of each cell is constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GroundTruthRule {
    /// Plant z0 uniformly in the half-radius ball and set
    /// x = G(z0) / ||G(z0)||; for linear generators the in-ball witness of
    /// mu x is checked and recorded.
    #[default]
    PlantedLatent,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub generator_path: String,
    pub model_kind: ModelKind,
    pub sigmas: Vec<f64>,
    pub m_grid: Vec<usize>,
    pub trials: usize,
    pub estimators: Vec<EstimatorSpec>,
    pub base_seed: u64,
    pub output_path: String,
    #[serde(default)]
    pub ground_truth: GroundTruthRule,
}

impl SweepConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
        let cfg: SweepConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generator_path.is_empty() {
            return Err(Error::Validation("generator_path: must be non-empty".into()));
        }
        if self.model_kind == ModelKind::Custom {
            return Err(Error::Validation(
                "model_kind: custom models are not usable from config files".into(),
            ));
        }
        if self.sigmas.is_empty() {
            return Err(Error::Validation("sigmas: must be non-empty".into()));
        }
        for (i, s) in self.sigmas.iter().enumerate() {
            if !s.is_finite() || *s < 0.0 {
                return Err(Error::Validation(format!(
                    "sigmas[{i}]: must be nonnegative and finite, got {s}"
                )));
            }
        }
        if self.m_grid.is_empty() {
            return Err(Error::Validation("m_grid: must be non-empty".into()));
        }
        for (i, m) in self.m_grid.iter().enumerate() {
            if *m < 1 {
                return Err(Error::Validation(format!("m_grid[{i}]: must be >= 1")));
            }
        }
        if self.trials < 1 {
            return Err(Error::Validation("trials: must be >= 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Validation("estimators: must be non-empty".into()));
        }
        for (i, est) in self.estimators.iter().enumerate() {
            est.validate()
                .map_err(|e| Error::Validation(format!("estimators[{i}]: {e}")))?;
            if est.kind == EstimatorKind::Bipg && !self.model_kind.is_one_bit() {
                return Err(Error::Validation(format!(
                    "estimators[{i}]: bipg requires a one-bit observation model, got '{}'",
                    self.model_kind
                )));
            }
        }
        if self.output_path.is_empty() {
            return Err(Error::Validation("output_path: must be non-empty".into()));
        }
        Ok(())
    }
}

/// Whether mu x was verified to have an in-ball latent witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Exact,
    Approximate,
    Unchecked,
}

/// One scored recovery. The CSV schema is the fixed 11-column order below;
/// `membership` is carried on the struct (and the run summary) only.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub estimator: &'static str,
    pub model_kind: &'static str,
    pub sigma: f64,
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    pub cosine_best: f64,
    pub cosine_mean: f64,
    pub l2_to_mux: f64,
    pub runtime_ms: f64,
    pub projection_mode: &'static str,
    pub membership: Membership,
}

pub const CSV_HEADER: &str =
    "estimator,model_kind,sigma,m,trial,seed,cosine_best,cosine_mean,l2_to_mux,runtime_ms,projection_mode";

fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v}")
    }
}

impl ResultRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:.3},{}",
            self.estimator,
            self.model_kind,
            fmt_float(self.sigma),
            self.m,
            self.trial,
            self.seed,
            fmt_float(self.cosine_best),
            fmt_float(self.cosine_mean),
            fmt_float(self.l2_to_mux),
            self.runtime_ms,
            self.projection_mode
        )
    }
}

/// Drop the runtime column from a results CSV; the determinism contract
/// covers everything else byte-for-byte.
pub fn csv_without_runtime(text: &str) -> String {
    text.lines()
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() == 11 {
                let mut kept = fields;
                kept.remove(9);
                kept.join(",")
            } else {
                line.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn cell_seed(base_seed: u64, sigma_idx: usize, m_idx: usize, trials: usize, trial: usize, n_m: usize) -> u64 {
    let counter = ((sigma_idx * n_m + m_idx) * trials + trial) as u64;
    derive(base_seed, counter)
}

pub fn estimator_seed(cell: u64, estimator_idx: usize) -> u64 {
    derive(derive(cell, stream::ESTIMATOR), estimator_idx as u64)
}

struct GroundTruth {
    x: Vec<f64>,
    membership: Membership,
    mu: Option<f64>,
}

/// Plant z0 uniformly in the half-radius ball: uniform direction times
/// radius (r/2) u^(1/k).
fn plant_latent(gen: &Generator, truth_seed: u64) -> Result<Vec<f64>> {
    let k = gen.latent_dim();
    let r = gen.radius();
    let mut rng = Rng::new(truth_seed);
    for _ in 0..100 {
        let dir = rng.normal_vec(k);
        let norm = linalg::norm2(&dir);
        if norm < 1e-12 {
            continue;
        }
        let u: f64 = rng.next_f64();
        let radius = 0.5 * r * u.powf(1.0 / k as f64);
        let z0 = linalg::scale(&dir, radius / norm);
        let w0 = gen.forward(&z0, DomainMode::Strict)?;
        if linalg::norm2(&w0) > 1e-12 {
            return Ok(z0);
        }
    }
    Err(Error::Numerical(
        "could not plant a latent with nonzero image in 100 draws".into(),
    ))
}

/// Unit direction planted through the generator: x = G(z0) / ||G(z0)||
/// with z0 uniform in the half-radius ball of the TRUTH stream of `seed`.
pub fn planted_direction(gen: &Generator, seed: u64) -> Result<Vec<f64>> {
    let z0 = plant_latent(gen, derive(seed, stream::TRUTH))?;
    let w0 = gen.forward(&z0, DomainMode::Strict)?;
    Ok(linalg::scale(&w0, 1.0 / linalg::norm2(&w0)))
}

fn ground_truth_for_cell(
    gen: &Generator,
    membership_projector: Option<&ExactLinearProjector>,
    model_kind: ModelKind,
    sigma: f64,
    cell: u64,
) -> Result<GroundTruth> {
    let z0 = plant_latent(gen, derive(cell, stream::TRUTH))?;
    let w0 = gen.forward(&z0, DomainMode::Strict)?;
    let x = linalg::scale(&w0, 1.0 / linalg::norm2(&w0));
    let mu = analytic_params(model_kind, sigma).ok().map(|p| p.mu);
    let membership = match (mu, membership_projector) {
        (Some(mu), Some(proj)) => {
            let target = linalg::scale(&x, mu);
            let (witness, residual) = proj.min_norm_witness(&target);
            let r = gen.radius();
            if residual <= 1e-8 * mu.abs().max(1.0)
                && linalg::norm2(&witness) <= r * (1.0 + 1e-12)
            {
                Membership::Exact
            } else {
                Membership::Approximate
            }
        }
        _ => Membership::Unchecked,
    };
    Ok(GroundTruth { x, membership, mu })
}

fn sample_for_kind(
    x: &[f64],
    m: usize,
    model: &ObservationModel,
    seed: u64,
) -> Result<MeasurementEnsemble> {
    if model.kind().is_signal_noise() {
        sample_adversarial_ensemble(x, m, model, seed)
    } else {
        sample_ensemble(x, m, model, seed)
    }
}

/// Cosine of a (possibly zero) estimate; a zero vector carries no direction
/// information and scores 0.
fn cosine_or_zero(x: &[f64], v: &[f64]) -> f64 {
    cosine_similarity(x, v).unwrap_or(0.0)
}

fn score_result(
    gen: &Generator,
    x: &[f64],
    mu: Option<f64>,
    res: &RecoveryResult,
) -> (f64, f64, f64) {
    let cosine_best = cosine_or_zero(x, &res.estimate);
    let cosine_mean = if res.per_restart.is_empty() {
        cosine_best
    } else {
        let mut sum = 0.0;
        let mut count = 0usize;
        for outcome in res.per_restart.iter().filter(|o| !o.diverged) {
            if let Ok(w) = gen.forward(&outcome.latent, DomainMode::Unchecked) {
                sum += cosine_or_zero(x, &w);
                count += 1;
            }
        }
        if count == 0 {
            cosine_best
        } else {
            sum / count as f64
        }
    };
    let l2 = mu.map_or(f64::NAN, |mu| error_to_scaled_target(&res.estimate, x, mu));
    (cosine_best, cosine_mean, l2)
}

fn run_cell(
    cfg: &SweepConfig,
    gen: &Generator,
    membership_projector: Option<&ExactLinearProjector>,
    sigma_idx: usize,
    m_idx: usize,
    trial: usize,
) -> Result<Vec<ResultRow>> {
    let sigma = cfg.sigmas[sigma_idx];
    let m = cfg.m_grid[m_idx];
    let cell = cell_seed(cfg.base_seed, sigma_idx, m_idx, cfg.trials, trial, cfg.m_grid.len());
    let model = ObservationModel::new(cfg.model_kind, sigma)?;
    let truth = ground_truth_for_cell(gen, membership_projector, cfg.model_kind, sigma, cell)?;
    let ensemble = sample_for_kind(&truth.x, m, &model, cell)?;
    let target: Option<Vec<f64>> = truth.mu.map(|mu| linalg::scale(&truth.x, mu));
    let mut rows = Vec::with_capacity(cfg.estimators.len());
    for (ei, est) in cfg.estimators.iter().enumerate() {
        let run_seed = estimator_seed(cell, ei);
        let mut spec = est.clone();
        spec.projection.restart_seed = run_seed;
        let started = Instant::now();
        let res = run_estimator(&ensemble, gen, &spec, target.as_deref())?;
        let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
        let (cosine_best, cosine_mean, l2) = score_result(gen, &truth.x, truth.mu, &res);
        rows.push(ResultRow {
            estimator: spec.kind.name(),
            model_kind: cfg.model_kind.name(),
            sigma,
            m,
            trial,
            seed: run_seed,
            cosine_best,
            cosine_mean,
            l2_to_mux: l2,
            runtime_ms,
            projection_mode: res.projection_mode_label(),
            membership: truth.membership,
        });
    }
    Ok(rows)
}

fn pool_size_from(var: Option<&str>) -> Result<usize> {
    match var {
        Some(v) => v.parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(|| {
            Error::Validation(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))
        }),
        None => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn pool_size() -> Result<usize> {
    pool_size_from(std::env::var(THREADS_ENV).ok().as_deref())
}

/// Run the full grid, writing rows to `cfg.output_path` in canonical order
/// (sigma index, then m index, then trial, then estimator order) with an
/// incremental flush after every contiguous write. Returns the rows.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let gen = load_generator(&cfg.generator_path)?;
    run_sweep_with_generator(cfg, &gen)
}

/// `run_sweep` against an already-loaded generator (the config's
/// generator_path is ignored).
pub fn run_sweep_with_generator(cfg: &SweepConfig, gen: &Generator) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let membership_projector = gen.as_linear().map(ExactLinearProjector::new);
    let cells: Vec<(usize, usize, usize)> = (0..cfg.sigmas.len())
        .flat_map(|si| {
            (0..cfg.m_grid.len())
                .flat_map(move |mi| (0..cfg.trials).map(move |t| (si, mi, t)))
        })
        .collect();
    let file = std::fs::File::create(&cfg.output_path)?;
    let mut writer = std::io::BufWriter::new(file);
    writeln!(writer, "{CSV_HEADER}")?;
    writer.flush()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(pool_size()?)
        .build()
        .map_err(|e| Error::Numerical(format!("work pool construction failed: {e}")))?;

    let (tx, rx) = mpsc::channel::<(usize, Result<Vec<ResultRow>>)>();
    let writer_handle = std::thread::spawn(move || -> Result<Vec<ResultRow>> {
        let mut pending: BTreeMap<usize, Vec<ResultRow>> = BTreeMap::new();
        let mut next = 0usize;
        let mut ordered = Vec::new();
        let mut first_error: Option<Error> = None;
        for (idx, item) in rx {
            match item {
                Ok(rows) => {
                    pending.insert(idx, rows);
                    while let Some(rows) = pending.remove(&next) {
                        for row in &rows {
                            writeln!(writer, "{}", row.to_csv_line())?;
                        }
                        writer.flush()?;
                        ordered.extend(rows);
                        next += 1;
                    }
                }
                Err(e) => {
                    if first_error.is_none() {
                        first_error = Some(e);
                    }
                }
            }
        }
        match first_error {
            Some(e) => Err(e),
            None => Ok(ordered),
        }
    });

    pool.install(|| {
        cells
            .par_iter()
            .enumerate()
            .for_each_with(tx, |tx, (idx, &(si, mi, t))| {
                let rows = run_cell(cfg, gen, membership_projector.as_ref(), si, mi, t);
                // A closed channel means the writer already failed.
                let _ = tx.send((idx, rows));
            });
    });

    writer_handle
        .join()
        .map_err(|_| Error::Numerical("results writer thread panicked".into()))?
}

/// One point of a rate study.
#[derive(Debug, Clone, Serialize)]
pub struct RatePoint {
    pub m: usize,
    pub mean_error: f64,
    pub std_error: f64,
    /// Reported theoretical scale xi sqrt(k ln(L r / delta) / m).
    pub theory: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateStudy {
    pub points: Vec<RatePoint>,
    pub fit: RateFit,
}

impl RateStudy {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,mean_error,std_error,theory\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{}\n",
                p.m,
                fmt_float(p.mean_error),
                fmt_float(p.std_error),
                fmt_float(p.theory)
            ));
        }
        out
    }
}

/// Mean recovery error of the non-iterative estimator per m over a
/// geometric grid, with the fitted log-log slope. Runs sequentially (the
/// stated runtime budgets assume a single thread).
pub fn run_rate_study(cfg: &SweepConfig, gen: &Generator) -> Result<RateStudy> {
    cfg.validate()?;
    if cfg.sigmas.len() != 1 {
        return Err(Error::Validation(
            "rate study: sigmas must contain exactly one value".into(),
        ));
    }
    let mut sorted = cfg.m_grid.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 4 || sorted.len() != cfg.m_grid.len() {
        return Err(Error::Validation(
            "rate study: m_grid needs at least 4 distinct values".into(),
        ));
    }
    let span = sorted[sorted.len() - 1] as f64 / sorted[0] as f64;
    if span < 8.0 {
        return Err(Error::Validation(format!(
            "rate study: m_grid must span at least 8x, got {span:.2}x"
        )));
    }
    if cfg.trials < 50 {
        return Err(Error::Validation("rate study: trials must be >= 50".into()));
    }
    if cfg.estimators.len() != 1 || cfg.estimators[0].kind != EstimatorKind::OneShot {
        return Err(Error::Validation(
            "rate study: estimators must be exactly [one_shot]".into(),
        ));
    }
    let sigma = cfg.sigmas[0];
    let params = analytic_params(cfg.model_kind, sigma)?;
    let membership_projector = gen.as_linear().map(ExactLinearProjector::new);
    let lipschitz = gen.lipschitz_bound();
    let radius = gen.radius();
    let k = gen.latent_dim();
    let model = ObservationModel::new(cfg.model_kind, sigma)?;
    let mut points = Vec::with_capacity(cfg.m_grid.len());
    for (mi, &m) in cfg.m_grid.iter().enumerate() {
        let mut errs = Vec::with_capacity(cfg.trials);
        for trial in 0..cfg.trials {
            let cell = cell_seed(cfg.base_seed, 0, mi, cfg.trials, trial, cfg.m_grid.len());
            let truth = ground_truth_for_cell(
                gen,
                membership_projector.as_ref(),
                cfg.model_kind,
                sigma,
                cell,
            )?;
            let ensemble = sample_for_kind(&truth.x, m, &model, cell)?;
            let mut spec = cfg.estimators[0].clone();
            spec.projection.restart_seed = estimator_seed(cell, 0);
            let res = run_estimator(&ensemble, gen, &spec, None)?;
            errs.push(error_to_scaled_target(&res.estimate, &truth.x, params.mu));
        }
        let mean = errs.iter().sum::<f64>() / errs.len() as f64;
        let var = errs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
            / (errs.len() as f64 - 1.0).max(1.0);
        points.push(RatePoint {
            m,
            mean_error: mean,
            std_error: (var / errs.len() as f64).sqrt(),
            theory: theoretical_error_scale(&params, k, lipschitz, radius, m, DEFAULT_DELTA),
        });
    }
    let fit = fit_rate_slope(
        &points
            .iter()
            .map(|p| (p.m, p.mean_error))
            .collect::<Vec<_>>(),
    )?;
    Ok(RateStudy { points, fit })
}

/// Figure-style aggregation of sweep rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlotGrouping {
    /// Mean cosine vs m at a fixed sigma.
    CosineVsM { sigma: f64 },
    /// Mean cosine vs sigma at a fixed m.
    CosineVsSigma { m: usize },
}

/// One delimited file per figure: the x column (m or sigma) followed by one
/// series column per estimator, values being the mean best-restart cosine
/// over trials.
pub fn emit_plot_data(rows: &[ResultRow], grouping: PlotGrouping, out: &mut dyn Write) -> Result<()> {
    let selected: Vec<&ResultRow> = rows
        .iter()
        .filter(|r| match grouping {
            PlotGrouping::CosineVsM { sigma } => r.sigma == sigma,
            PlotGrouping::CosineVsSigma { m } => r.m == m,
        })
        .collect();
    if selected.is_empty() {
        return Err(Error::Validation(
            "plot grouping selected no rows (empty group)".into(),
        ));
    }
    let mut estimators: Vec<&'static str> = Vec::new();
    for r in &selected {
        if !estimators.contains(&r.estimator) {
            estimators.push(r.estimator);
        }
    }
    let mut xs: Vec<f64> = Vec::new();
    for r in &selected {
        let x = match grouping {
            PlotGrouping::CosineVsM { .. } => r.m as f64,
            PlotGrouping::CosineVsSigma { .. } => r.sigma,
        };
        if !xs.contains(&x) {
            xs.push(x);
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let x_name = match grouping {
        PlotGrouping::CosineVsM { .. } => "m",
        PlotGrouping::CosineVsSigma { .. } => "sigma",
    };
    write!(out, "{x_name}")?;
    for est in &estimators {
        write!(out, ",{est}")?;
    }
    writeln!(out)?;
    for &x in &xs {
        write!(out, "{}", fmt_float(x))?;
        for est in &estimators {
            let vals: Vec<f64> = selected
                .iter()
                .filter(|r| {
                    r.estimator == *est
                        && match grouping {
                            PlotGrouping::CosineVsM { .. } => r.m as f64 == x,
                            PlotGrouping::CosineVsSigma { .. } => r.sigma == x,
                        }
                })
                .map(|r| r.cosine_best)
                .collect();
            if vals.is_empty() {
                return Err(Error::Validation(format!(
                    "plot grouping: no rows for estimator '{est}' at {x_name} = {x}"
                )));
            }
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            write!(out, ",{}", fmt_float(mean))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Default synthetic MLP fixture: relu layers 20-64-64-200 with zero biases
/// and seeded Gaussian weights rescaled so every layer has spectral norm
/// 1.5 exactly, domain radius sqrt(k). Zero biases keep the relu network
/// positively homogeneous, so mu x stays in the range of G for mu > 0.
pub fn default_mlp_fixture(seed: u64) -> Generator {
    mlp_fixture(&[20, 64, 64, 200], 1.5, seed)
}

/// Relu MLP with the given layer widths, zero biases, and exact per-layer
/// spectral norm.
pub fn mlp_fixture(dims: &[usize], layer_norm: f64, seed: u64) -> Generator {
    assert!(dims.len() >= 2, "fixture needs at least one layer");
    let k = dims[0];
    let mut rng = Rng::from_tag(seed, stream::TRUTH);
    let mut layers = Vec::with_capacity(dims.len() - 1);
    for win in dims.windows(2) {
        let (input, output) = (win[0], win[1]);
        let mut w = Matrix::zeros(output, input);
        rng.fill_normal(w.data_mut());
        let s = linalg::spectral_norm(&w, 1e-10, 2000);
        let factor = layer_norm / s;
        for v in w.data_mut() {
            *v *= factor;
        }
        layers.push(MlpLayer {
            weights: w,
            bias: vec![0.0; output],
            activation: Activation::Relu,
        });
    }
    let domain = LatentBall::new(k, (k as f64).sqrt()).unwrap();
    Generator::Mlp(MlpGenerator::new(layers, domain).unwrap())
}

/// Linear generator with orthonormal columns (Gram-Schmidt on seeded
/// Gaussian draws) and the given domain radius.
pub fn orthonormal_linear_fixture(n: usize, k: usize, radius: f64, seed: u64) -> Generator {
    assert!(n >= k && k >= 1);
    let mut rng = Rng::from_tag(seed, stream::TRUTH);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    while cols.len() < k {
        let mut v = rng.normal_vec(n);
        for c in &cols {
            let proj = linalg::dot(&v, c);
            linalg::axpy(&mut v, -proj, c);
        }
        let norm = linalg::norm2(&v);
        if norm < 1e-8 {
            continue;
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        cols.push(v);
    }
    let mut b = Matrix::zeros(n, k);
    for (j, c) in cols.iter().enumerate() {
        for (i, &v) in c.iter().enumerate() {
            *b.at_mut(i, j) = v;
        }
    }
    Generator::Linear(LinearGenerator::new(b, LatentBall::new(k, radius).unwrap()).unwrap())
}
