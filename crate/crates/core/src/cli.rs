//! Command-line interface.
//!
//! Subcommands: `params`, `simulate`, `project`, `recover`, `sweep`,
//! `rate`, `diagnose`, and the `fixture` helper that writes the built-in
//! generators to disk. Exit codes: 0 on success, 1 on validation errors
//! (including usage errors), 2 on numerical failures. All randomness is
//! controlled by `--seed`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diagnostics::{
    noise_budget_curve, event_e_frequency, mu_hat_concentration, orthogonal_tail,
};
use crate::error::{Error, Result};
use crate::estimators::{run_estimator, EstimatorKind, EstimatorSpec, StepSize};
use crate::generators::{load_generator, save_generator, DomainMode, Generator};
use crate::harness::{
    csv_without_runtime, default_mlp_fixture, emit_plot_data, orthonormal_linear_fixture,
    planted_direction, run_rate_study, run_sweep, PlotGrouping, SweepConfig,
};
use crate::linalg;
use crate::metrics::cosine_similarity;
use crate::observation::{
    analytic_params, random_unit_x, sample_adversarial_ensemble, sample_ensemble, sim_parameters,
    ModelKind, ObservationModel, ParamMethod,
};
use crate::projection::{project, ProjectionConfig, ProjectionMethod};

#[derive(Parser, Debug)]
#[command(
    name = "genrec",
    about = "Direction recovery from nonlinear observations under generative priors",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the characterization parameters (mu, xi^2, rho^2, theta^4) of
    /// an observation model.
    Params(ParamsArgs),
    /// Sample a measurement ensemble and emit it as JSON.
    Simulate(SimulateArgs),
    /// Project a vector file onto the range of a generator.
    Project(ProjectArgs),
    /// Run a single recovery against a sampled ensemble.
    Recover(RecoverArgs),
    /// Run a sweep from a config file, writing results CSV.
    Sweep(SweepArgs),
    /// Run a rate study (error vs m with a fitted log-log slope).
    Rate(RateArgs),
    /// Empirical diagnostics of the concentration behavior.
    Diagnose(DiagnoseArgs),
    /// Write a built-in generator fixture to disk.
    Fixture(FixtureArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    #[value(name = "one-bit", alias = "noisy-one-bit")]
    OneBit,
    #[value(name = "cubic", alias = "noisy-cubic")]
    Cubic,
    Identity,
    #[value(name = "one-bit-signal-noise")]
    OneBitSignalNoise,
    #[value(name = "cubic-signal-noise")]
    CubicSignalNoise,
}

impl ModelArg {
    fn kind(&self) -> ModelKind {
        match self {
            ModelArg::OneBit => ModelKind::NoisyOneBit,
            ModelArg::Cubic => ModelKind::NoisyCubic,
            ModelArg::Identity => ModelKind::Identity,
            ModelArg::OneBitSignalNoise => ModelKind::OneBitSignalNoise,
            ModelArg::CubicSignalNoise => ModelKind::CubicSignalNoise,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Analytic,
    Quadrature,
    #[value(name = "monte-carlo")]
    MonteCarlo,
}

impl MethodArg {
    fn method(&self) -> ParamMethod {
        match self {
            MethodArg::Analytic => ParamMethod::Analytic,
            MethodArg::Quadrature => ParamMethod::Quadrature,
            MethodArg::MonteCarlo => ParamMethod::MonteCarlo,
        }
    }
}

#[derive(Args, Debug)]
struct ParamsArgs {
    #[arg(long)]
    model: ModelArg,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, value_enum, default_value = "analytic")]
    method: MethodArg,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    model: ModelArg,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long)]
    m: usize,
    /// Ambient dimension; the ground-truth direction is a seeded random
    /// unit vector.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProjMethodArg {
    Exact,
    Adam,
}

#[derive(Args, Debug)]
struct ProjectArgs {
    #[arg(long)]
    generator: PathBuf,
    /// JSON array with the vector to project.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "adam")]
    method: ProjMethodArg,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluate outside the latent ball instead of clipping onto it.
    #[arg(long)]
    unchecked: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EstimatorArg {
    #[value(name = "one-shot")]
    OneShot,
    Bipg,
    Pgd,
    Csgm,
    #[value(name = "lasso")]
    Lasso,
}

impl EstimatorArg {
    fn kind(&self) -> EstimatorKind {
        match self {
            EstimatorArg::OneShot => EstimatorKind::OneShot,
            EstimatorArg::Bipg => EstimatorKind::Bipg,
            EstimatorArg::Pgd => EstimatorKind::Pgd,
            EstimatorArg::Csgm => EstimatorKind::Csgm,
            EstimatorArg::Lasso => EstimatorKind::LassoIsta,
        }
    }
}

#[derive(Args, Debug)]
struct RecoverArgs {
    #[arg(long)]
    generator: PathBuf,
    #[arg(long)]
    model: ModelArg,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    estimator: EstimatorArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the exact linear projector instead of latent Adam.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 30)]
    iterations: usize,
    /// Step size for bipg/pgd: a number or "one_over_m".
    #[arg(long, default_value = "one_over_m")]
    step_size: String,
    #[arg(long, default_value_t = 0.1)]
    shrinkage: f64,
    #[arg(long, default_value_t = 500)]
    ista_iters: usize,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Directory for figure-style aggregates (one file per sigma and per m).
    #[arg(long)]
    plots: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RateArgs {
    #[arg(long)]
    config: PathBuf,
    /// CSV output path for the per-m table; stdout summary either way.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DiagnoseOp {
    #[value(name = "event-e")]
    EventE,
    #[value(name = "mu-hat")]
    MuHat,
    #[value(name = "orthogonal-tail")]
    OrthogonalTail,
    #[value(name = "noise-curve")]
    NoiseCurve,
}

#[derive(Args, Debug)]
struct DiagnoseArgs {
    #[arg(long)]
    op: DiagnoseOp,
    #[arg(long)]
    model: ModelArg,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long)]
    m: usize,
    /// Ambient dimension (ground truth is a seeded random unit vector; the
    /// noise-curve op plants it through the generator instead).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Chebyshev radius for mu-hat.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Deviation parameter for orthogonal-tail.
    #[arg(long, default_value_t = 2.0)]
    epsilon: f64,
    /// Ascending corruption budgets for noise-curve, comma separated.
    #[arg(long, default_value = "0,0.1,0.2,0.3,0.4,0.5", value_delimiter = ',')]
    nu_grid: Vec<f64>,
    /// Generator file (noise-curve only).
    #[arg(long)]
    generator: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FixtureKind {
    /// Relu MLP 20-64-64-200, zero biases, per-layer spectral norm 1.5.
    Mlp,
    /// Linear generator with orthonormal columns.
    Linear,
}

#[derive(Args, Debug)]
struct FixtureArgs {
    #[arg(long, value_enum, default_value = "mlp")]
    kind: FixtureKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Linear fixture dimensions.
    #[arg(long, default_value_t = 400)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Linear fixture domain radius.
    #[arg(long, default_value_t = 6.0)]
    radius: f64,
    #[arg(long)]
    out: PathBuf,
}

/// Entry point used by `main`; returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let mut stdout = std::io::stdout();
    match run(cli, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Execute a parsed command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.cmd {
        Cmd::Params(a) => cmd_params(a, out),
        Cmd::Simulate(a) => cmd_simulate(a, out),
        Cmd::Project(a) => cmd_project(a, out),
        Cmd::Recover(a) => cmd_recover(a, out),
        Cmd::Sweep(a) => cmd_sweep(a, out),
        Cmd::Rate(a) => cmd_rate(a, out),
        Cmd::Diagnose(a) => cmd_diagnose(a, out),
        Cmd::Fixture(a) => cmd_fixture(a, out),
    }
}

fn build_model(kind: ModelKind, sigma: f64) -> Result<ObservationModel> {
    ObservationModel::new(kind, sigma)
}

fn cmd_params(a: ParamsArgs, out: &mut dyn Write) -> Result<()> {
    let model = build_model(a.model.kind(), a.sigma)?;
    let p = sim_parameters(&model, a.method.method(), a.samples, a.seed)?;
    writeln!(out, "model = {} (sigma = {})", model.kind(), a.sigma)?;
    writeln!(out, "method = {}", p.method.name())?;
    match &p.std_errors {
        Some(se) => {
            writeln!(out, "mu = {} +/- {}", p.mu, se.mu)?;
            writeln!(out, "xi_sq = {} +/- {}", p.xi_sq, se.xi_sq)?;
            writeln!(out, "rho_sq = {} +/- {}", p.rho_sq, se.rho_sq)?;
            writeln!(out, "theta_4 = {} +/- {}", p.theta_4, se.theta_4)?;
        }
        None => {
            writeln!(out, "mu = {}", p.mu)?;
            writeln!(out, "xi_sq = {}", p.xi_sq)?;
            writeln!(out, "rho_sq = {}", p.rho_sq)?;
            writeln!(out, "theta_4 = {}", p.theta_4)?;
        }
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let model = build_model(a.model.kind(), a.sigma)?;
    let x = random_unit_x(a.n, a.seed);
    let ens = if model.kind().is_signal_noise() {
        sample_adversarial_ensemble(&x, a.m, &model, a.seed)?
    } else {
        sample_ensemble(&x, a.m, &model, a.seed)?
    };
    let json = ens.to_json()?;
    match &a.out {
        Some(path) => {
            std::fs::write(path, json)?;
            writeln!(out, "wrote ensemble (m = {}, n = {}) to {}", a.m, a.n, path.display())?;
        }
        None => writeln!(out, "{json}")?,
    }
    Ok(())
}

fn read_vector(path: &PathBuf) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

fn cmd_project(a: ProjectArgs, out: &mut dyn Write) -> Result<()> {
    let gen = load_generator(&a.generator)?;
    let s = read_vector(&a.input)?;
    let cfg = ProjectionConfig {
        method: match a.method {
            ProjMethodArg::Exact => ProjectionMethod::ExactLinear,
            ProjMethodArg::Adam => ProjectionMethod::LatentAdam,
        },
        steps: a.steps,
        learning_rate: a.learning_rate,
        restarts: a.restarts,
        restart_seed: a.seed,
        domain_mode: if a.unchecked {
            DomainMode::Unchecked
        } else {
            DomainMode::Strict
        },
    };
    let res = project(&gen, &s, &cfg)?;
    writeln!(out, "mode = {}", res.mode.label())?;
    writeln!(out, "objective = {}", res.objective)?;
    writeln!(out, "witness_norm = {}", linalg::norm2(&res.z))?;
    let restarts: Vec<f64> = res.per_restart.iter().map(|o| o.objective).collect();
    writeln!(out, "per_restart_objectives = {restarts:?}")?;
    if let Some(path) = &a.out {
        #[derive(serde::Serialize)]
        struct ProjectionFile<'a> {
            mode: &'a str,
            objective: f64,
            w: &'a [f64],
            z: &'a [f64],
            per_restart_objectives: Vec<f64>,
        }
        let file = ProjectionFile {
            mode: res.mode.label(),
            objective: res.objective,
            w: &res.w,
            z: &res.z,
            per_restart_objectives: restarts,
        };
        std::fs::write(path, serde_json::to_string_pretty(&file).unwrap())?;
        writeln!(out, "wrote projection to {}", path.display())?;
    }
    Ok(())
}

fn cmd_recover(a: RecoverArgs, out: &mut dyn Write) -> Result<()> {
    let gen = load_generator(&a.generator)?;
    let model = build_model(a.model.kind(), a.sigma)?;
    let x = planted_direction(&gen, a.seed)?;
    let ens = if model.kind().is_signal_noise() {
        sample_adversarial_ensemble(&x, a.m, &model, a.seed)?
    } else {
        sample_ensemble(&x, a.m, &model, a.seed)?
    };
    let step_size: StepSize = if a.step_size == "one_over_m" {
        StepSize::OneOverM
    } else {
        StepSize::Fixed(a.step_size.parse::<f64>().map_err(|_| {
            Error::Validation(format!(
                "step_size must be a number or \"one_over_m\", got '{}'",
                a.step_size
            ))
        })?)
    };
    let projection = ProjectionConfig {
        method: if a.exact {
            ProjectionMethod::ExactLinear
        } else {
            ProjectionMethod::LatentAdam
        },
        steps: a.steps,
        learning_rate: a.learning_rate,
        restarts: a.restarts,
        restart_seed: a.seed,
        domain_mode: DomainMode::Strict,
    };
    let mut spec = EstimatorSpec::new(a.estimator.kind(), projection);
    spec.iterations = a.iterations;
    spec.step_size = step_size;
    spec.shrinkage = a.shrinkage;
    spec.ista_iters = a.ista_iters;
    let mu = analytic_params(model.kind(), a.sigma).ok().map(|p| p.mu);
    let target = mu.map(|mu| linalg::scale(&x, mu));
    let res = run_estimator(&ens, &gen, &spec, target.as_deref())?;
    writeln!(out, "estimator = {}", spec.kind.name())?;
    writeln!(out, "projection_mode = {}", res.projection_mode_label())?;
    let cosine = cosine_similarity(&x, &res.estimate).unwrap_or(0.0);
    writeln!(out, "cosine = {cosine}")?;
    match (mu, target) {
        (Some(mu), Some(t)) => {
            let err = linalg::norm2(&linalg::sub(&res.estimate, &t));
            writeln!(out, "mu = {mu}")?;
            writeln!(out, "l2_to_mux = {err}")?;
        }
        _ => writeln!(out, "l2_to_mux = nan (no closed-form mu for this model)")?,
    }
    writeln!(out, "runtime_ms = {:.3}", res.runtime_ms)?;
    Ok(())
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = SweepConfig::from_path(&a.config)?;
    let rows = run_sweep(&cfg)?;
    writeln!(out, "wrote {} rows to {}", rows.len(), cfg.output_path)?;
    if let Some(dir) = &a.plots {
        std::fs::create_dir_all(dir)?;
        for &sigma in &cfg.sigmas {
            let path = dir.join(format!("cosine_vs_m_sigma_{sigma}.csv"));
            let mut file = std::fs::File::create(&path)?;
            emit_plot_data(&rows, PlotGrouping::CosineVsM { sigma }, &mut file)?;
            writeln!(out, "wrote {}", path.display())?;
        }
        for &m in &cfg.m_grid {
            let path = dir.join(format!("cosine_vs_sigma_m_{m}.csv"));
            let mut file = std::fs::File::create(&path)?;
            emit_plot_data(&rows, PlotGrouping::CosineVsSigma { m }, &mut file)?;
            writeln!(out, "wrote {}", path.display())?;
        }
    }
    Ok(())
}

fn cmd_rate(a: RateArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = SweepConfig::from_path(&a.config)?;
    let gen = load_generator(&cfg.generator_path)?;
    let study = run_rate_study(&cfg, &gen)?;
    writeln!(out, "slope = {}", study.fit.slope)?;
    writeln!(out, "intercept = {}", study.fit.intercept)?;
    writeln!(out, "r_squared = {}", study.fit.r_squared)?;
    writeln!(out, "slope_std_error = {}", study.fit.slope_std_error)?;
    for p in &study.points {
        writeln!(
            out,
            "m = {:6}  mean_error = {:.6}  std_error = {:.6}  theory = {:.6}",
            p.m, p.mean_error, p.std_error, p.theory
        )?;
    }
    if let Some(path) = &a.out {
        std::fs::write(path, study.to_csv())?;
        writeln!(out, "wrote rate table to {}", path.display())?;
    }
    Ok(())
}

fn cmd_diagnose(a: DiagnoseArgs, out: &mut dyn Write) -> Result<()> {
    let model = build_model(a.model.kind(), a.sigma)?;
    let mut csv = String::new();
    match a.op {
        DiagnoseOp::EventE => {
            let n = a.n.ok_or_else(|| Error::Validation("--n is required for event-e".into()))?;
            let x = random_unit_x(n, a.seed);
            let rep = event_e_frequency(&model, &x, a.m, a.trials, a.seed)?;
            writeln!(out, "frequency = {}", rep.frequency)?;
            writeln!(out, "bound = {}", rep.bound)?;
            writeln!(out, "std_error = {}", rep.std_error)?;
            writeln!(out, "satisfied = {}", rep.satisfied)?;
            csv = format!(
                "frequency,bound,std_error,satisfied\n{},{},{},{}\n",
                rep.frequency, rep.bound, rep.std_error, rep.satisfied
            );
        }
        DiagnoseOp::MuHat => {
            let n = a.n.ok_or_else(|| Error::Validation("--n is required for mu-hat".into()))?;
            let x = random_unit_x(n, a.seed);
            let rep = mu_hat_concentration(&model, &x, a.m, a.t, a.trials, a.seed)?;
            writeln!(out, "tail_frequency = {}", rep.tail_frequency)?;
            writeln!(out, "bound = {}", rep.bound)?;
            writeln!(out, "std_error = {}", rep.std_error)?;
            writeln!(out, "satisfied = {}", rep.satisfied)?;
            csv = format!(
                "tail_frequency,bound,std_error,satisfied\n{},{},{},{}\n",
                rep.tail_frequency, rep.bound, rep.std_error, rep.satisfied
            );
        }
        DiagnoseOp::OrthogonalTail => {
            let n = a
                .n
                .ok_or_else(|| Error::Validation("--n is required for orthogonal-tail".into()))?;
            let x = random_unit_x(n, a.seed);
            // Deterministic probe orthogonal to x from the next seed.
            let mut s = random_unit_x(n, a.seed.wrapping_add(1));
            let align = linalg::dot(&s, &x);
            linalg::axpy(&mut s, -align, &x);
            let rep = orthogonal_tail(&model, &x, &s, a.m, a.epsilon, a.trials, a.seed)?;
            writeln!(out, "tail_frequency = {}", rep.tail_frequency)?;
            writeln!(out, "gaussian_prediction = {}", rep.gaussian_prediction)?;
            writeln!(out, "threshold = {}", rep.threshold)?;
            writeln!(out, "satisfied = {}", rep.satisfied)?;
            csv = format!(
                "tail_frequency,gaussian_prediction,threshold,std_error,satisfied\n{},{},{},{},{}\n",
                rep.tail_frequency, rep.gaussian_prediction, rep.threshold, rep.std_error, rep.satisfied
            );
        }
        DiagnoseOp::NoiseCurve => {
            let gen_path = a.generator.as_ref().ok_or_else(|| {
                Error::Validation("--generator is required for noise-curve".into())
            })?;
            let gen = load_generator(gen_path)?;
            let x = planted_direction(&gen, a.seed)?;
            let cfg = match &gen {
                Generator::Linear(_) => ProjectionConfig::exact_linear(),
                Generator::Mlp(_) => ProjectionConfig::latent_adam(a.seed),
            };
            let curve = noise_budget_curve(
                &model, &gen, &x, a.m, &a.nu_grid, a.trials, a.seed, &cfg,
            )?;
            csv.push_str("nu,mean_error,std_error\n");
            for p in &curve.points {
                writeln!(
                    out,
                    "nu = {:.3}  mean_error = {:.6}  std_error = {:.6}",
                    p.nu, p.mean_error, p.std_error
                )?;
                csv.push_str(&format!("{},{},{}\n", p.nu, p.mean_error, p.std_error));
            }
            let (curv, curv_se) = curve.curvature_t_statistics()?;
            writeln!(out, "curvature = {curv} +/- {curv_se}")?;
            writeln!(out, "mean_inversions = {}", curve.mean_inversions())?;
        }
    }
    if let Some(path) = &a.out {
        std::fs::write(path, csv)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(())
}

fn cmd_fixture(a: FixtureArgs, out: &mut dyn Write) -> Result<()> {
    let gen = match a.kind {
        FixtureKind::Mlp => default_mlp_fixture(a.seed),
        FixtureKind::Linear => orthonormal_linear_fixture(a.n, a.k, a.radius, a.seed),
    };
    save_generator(&gen, &a.out)?;
    writeln!(
        out,
        "wrote {} generator (k = {}, n = {}, r = {}) to {}",
        match a.kind {
            FixtureKind::Mlp => "mlp",
            FixtureKind::Linear => "linear",
        },
        gen.latent_dim(),
        gen.ambient_dim(),
        gen.radius(),
        a.out.display()
    )?;
    Ok(())
}

/// Re-export for integration tests that need to compare sweep outputs.
pub fn strip_runtime(text: &str) -> String {
    csv_without_runtime(text)
}
