//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities. Every tolerance is pinned in the assertions.

use std::time::Instant;

use genrec::diagnostics::{event_e_frequency, mu_hat_concentration};
use genrec::estimators::{bipg, one_shot, pgd, EstimatorKind, EstimatorSpec};
use genrec::generators::{Generator, LatentBall, LinearGenerator};
use genrec::harness::{
    csv_without_runtime, default_mlp_fixture, orthonormal_linear_fixture, run_rate_study,
    run_sweep_with_generator, GroundTruthRule, SweepConfig,
};
use genrec::linalg::{self, Matrix};
use genrec::observation::{
    analytic_params, monte_carlo_params, random_unit_x, sample_ensemble, ModelKind,
    ObservationModel,
};
use genrec::projection::{project_exact_linear, project_latent, ProjectionConfig};
use genrec::rng::Rng;

fn random_linear(n: usize, k: usize, r: f64, seed: u64) -> LinearGenerator {
    let mut rng = Rng::new(seed);
    let data: Vec<f64> = (0..n * k)
        .map(|_| rng.next_normal() / (n as f64).sqrt())
        .collect();
    LinearGenerator::new(Matrix::new(n, k, data), LatentBall::new(k, r).unwrap()).unwrap()
}

/// Criterion 1: Monte Carlo sim parameters (1e6 samples) match the analytic
/// formulas within 3 reported standard errors; runtime < 10 s total.
#[test]
fn c01_sim_parameter_oracle_agreement() {
    let start = Instant::now();
    let configs = [
        (ModelKind::NoisyOneBit, 0.0),
        (ModelKind::NoisyOneBit, 0.5),
        (ModelKind::NoisyOneBit, 1.0),
        (ModelKind::NoisyCubic, 0.0),
        (ModelKind::NoisyCubic, 1.0),
    ];
    for (i, &(kind, sigma)) in configs.iter().enumerate() {
        let model = ObservationModel::new(kind, sigma).unwrap();
        let mc = monte_carlo_params(&model, 1_000_000, 1000 + i as u64).unwrap();
        let an = analytic_params(kind, sigma).unwrap();
        // Pin the closed forms the oracle is compared against.
        match kind {
            ModelKind::NoisyOneBit => {
                let s2 = sigma * sigma;
                let mu = (2.0 / (std::f64::consts::PI * (1.0 + s2))).sqrt();
                assert!((an.mu - mu).abs() < 1e-14);
                assert_eq!(an.xi_sq, 1.0);
            }
            ModelKind::NoisyCubic => {
                let s2 = sigma * sigma;
                assert_eq!(an.mu, 3.0);
                assert_eq!(an.xi_sq, 15.0 + s2);
                assert_eq!(an.rho_sq, 96.0 + s2);
                assert_eq!(an.theta_4, 10170.0 + 60.0 * s2 + 2.0 * s2 * s2);
            }
            _ => unreachable!(),
        }
        let se = mc.std_errors.unwrap();
        for (name, got, want, err) in [
            ("mu", mc.mu, an.mu, se.mu),
            ("xi_sq", mc.xi_sq, an.xi_sq, se.xi_sq),
            ("rho_sq", mc.rho_sq, an.rho_sq, se.rho_sq),
            ("theta_4", mc.theta_4, an.theta_4, se.theta_4),
        ] {
            assert!(
                (got - want).abs() <= 3.0 * err.max(1e-12),
                "{kind:?} sigma {sigma}: {name} = {got} vs {want} (3 se = {})",
                3.0 * err
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "runtime {elapsed:.2}s exceeds 10s");
    println!("ACCEPTANCE c01 sim_parameter_oracle_agreement: PASS ({elapsed:.2}s)");
}

/// Criterion 2: log-log slope of the mean recovery error vs m lies in
/// [-0.60, -0.40] with r^2 >= 0.97 on the cubic model with exact
/// projection; runtime < 5 min single-threaded.
#[test]
fn c02_rate_slope() {
    let start = Instant::now();
    let gen = orthonormal_linear_fixture(400, 10, 6.0, 7);
    let cfg = SweepConfig {
        generator_path: String::from("<in-memory>"),
        model_kind: ModelKind::NoisyCubic,
        sigmas: vec![1.0],
        m_grid: vec![250, 500, 1000, 2000, 4000, 8000],
        trials: 100,
        estimators: vec![EstimatorSpec::new(
            EstimatorKind::OneShot,
            ProjectionConfig::exact_linear(),
        )],
        base_seed: 20,
        output_path: String::from("unused.csv"),
        ground_truth: GroundTruthRule::PlantedLatent,
    };
    let study = run_rate_study(&cfg, &gen).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        study.fit.slope >= -0.60 && study.fit.slope <= -0.40,
        "slope {} outside [-0.60, -0.40]",
        study.fit.slope
    );
    assert!(
        study.fit.r_squared >= 0.97,
        "r^2 {} below 0.97",
        study.fit.r_squared
    );
    assert!(elapsed < 300.0, "runtime {elapsed:.1}s exceeds 5 min");
    println!(
        "ACCEPTANCE c02 rate_slope: PASS (slope = {:.4}, r^2 = {:.5}, {elapsed:.1}s)",
        study.fit.slope, study.fit.r_squared
    );
}

/// Criterion 3: the first iterate of the iterative baselines equals the
/// non-iterative estimator to max-abs 1e-12 on 50 random instances each.
#[test]
fn c03_first_iterate_identity() {
    let mut worst_bipg = 0.0_f64;
    let mut worst_pgd = 0.0_f64;
    for inst in 0..50u64 {
        let k = 2 + (inst % 5) as usize;
        let n = 10 + (inst % 4) as usize * 10;
        let m = 10 + (inst % 6) as usize * 10;
        let gen = Generator::Linear(random_linear(n, k, 2.0, 3000 + inst));
        let x = random_unit_x(n, 4000 + inst);

        let one_bit = ObservationModel::noisy_one_bit(0.5).unwrap();
        let ens = sample_ensemble(&x, m, &one_bit, 5000 + inst).unwrap();
        let os = one_shot(&ens, &gen, &ProjectionConfig::exact_linear()).unwrap();
        let mut spec = EstimatorSpec::new(EstimatorKind::Bipg, ProjectionConfig::exact_linear());
        spec.iterations = 1;
        let first = bipg(&ens, &gen, &spec, None).unwrap();
        worst_bipg = worst_bipg.max(linalg::max_abs_diff(&os.estimate, &first.estimate));

        let cubic = ObservationModel::noisy_cubic(1.0).unwrap();
        let ens = sample_ensemble(&x, m, &cubic, 6000 + inst).unwrap();
        let os = one_shot(&ens, &gen, &ProjectionConfig::exact_linear()).unwrap();
        let mut spec = EstimatorSpec::new(EstimatorKind::Pgd, ProjectionConfig::exact_linear());
        spec.iterations = 1;
        let first = pgd(&ens, &gen, &spec, None).unwrap();
        worst_pgd = worst_pgd.max(linalg::max_abs_diff(&os.estimate, &first.estimate));
    }
    assert!(worst_bipg <= 1e-12, "bipg first-iterate gap {worst_bipg}");
    assert!(worst_pgd <= 1e-12, "pgd first-iterate gap {worst_pgd}");
    println!(
        "ACCEPTANCE c03 first_iterate_identity: PASS (bipg {worst_bipg:.2e}, pgd {worst_pgd:.2e})"
    );
}

/// Criterion 4: exact projection beats a 400x400 grid over the ball up to
/// the grid's Lipschitz slack on 100 random k=2 instances, with KKT
/// residuals <= 1e-8.
#[test]
fn c04_exact_projection_grid() {
    let cells = 400usize;
    let mut worst_kkt = 0.0_f64;
    for inst in 0..100u64 {
        let n = 6;
        let r = 1.0;
        let gen = random_linear(n, 2, r, 7000 + inst);
        let mut rng = Rng::new(8000 + inst);
        let s = rng.normal_vec(n);
        let res = project_exact_linear(&gen, &s).unwrap();

        // Grid minimum and its certified slack: any ball point has an
        // in-ball grid point within 2 sqrt(2) h, and the objective gradient
        // over the ball is bounded by 2 ||B|| (||B|| r + ||s||).
        let h = 2.0 * r / (cells as f64 - 1.0);
        let b = gen.matrix();
        let mut grid_best = f64::INFINITY;
        for i in 0..cells {
            for j in 0..cells {
                let z = [-r + h * i as f64, -r + h * j as f64];
                if z[0] * z[0] + z[1] * z[1] > r * r {
                    continue;
                }
                let resid = linalg::sub(&b.matvec(&z), &s);
                let obj = linalg::dot(&resid, &resid);
                if obj < grid_best {
                    grid_best = obj;
                }
            }
        }
        let bnorm = linalg::spectral_norm(b, 1e-10, 1000);
        let lip = 2.0 * bnorm * (bnorm * r + linalg::norm2(&s));
        let slack = lip * 2.0 * std::f64::consts::SQRT_2 * h;
        assert!(
            res.objective <= grid_best + 1e-9,
            "instance {inst}: exact {} above grid {grid_best}",
            res.objective
        );
        assert!(
            res.objective >= grid_best - slack,
            "instance {inst}: exact {} below grid {grid_best} minus slack {slack}",
            res.objective
        );

        // KKT residual: interior stationarity or boundary stationarity
        // with a nonnegative multiplier.
        let grad = b.matvec_t(&linalg::sub(&b.matvec(&res.z), &s));
        let scale = linalg::norm2(&b.matvec_t(&s)).max(1.0);
        let znorm = linalg::norm2(&res.z);
        let kkt = if znorm < r * (1.0 - 1e-9) {
            linalg::norm2(&grad) / scale
        } else {
            let lambda = -linalg::dot(&grad, &res.z) / (znorm * znorm);
            assert!(lambda >= -1e-8, "instance {inst}: negative multiplier {lambda}");
            let mut stat = grad.clone();
            linalg::axpy(&mut stat, lambda, &res.z);
            linalg::norm2(&stat) / scale
        };
        worst_kkt = worst_kkt.max(kkt);
    }
    assert!(worst_kkt <= 1e-8, "worst KKT residual {worst_kkt}");
    println!("ACCEPTANCE c04 exact_projection_grid: PASS (worst KKT {worst_kkt:.2e})");
}

/// Criterion 5: empirical frequency of the second-moment event on the
/// cubic model (m = 200, 1000 trials) meets its Chebyshev bound
/// 1 - 10232/51200 with 3-se slack; runtime < 30 s.
#[test]
fn c05_event_bound() {
    let start = Instant::now();
    let model = ObservationModel::noisy_cubic(1.0).unwrap();
    let x = random_unit_x(50, 30);
    let rep = event_e_frequency(&model, &x, 200, 1000, 31).unwrap();
    assert!((rep.bound - (1.0 - 10232.0 / 51200.0)).abs() < 1e-12);
    assert!(
        rep.frequency >= rep.bound - 3.0 * rep.std_error,
        "frequency {} below bound {} - 3 se {}",
        rep.frequency,
        rep.bound,
        3.0 * rep.std_error
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "runtime {elapsed:.2}s exceeds 30s");
    println!(
        "ACCEPTANCE c05 event_bound: PASS (frequency {:.4} vs bound {:.4}, {elapsed:.1}s)",
        rep.frequency, rep.bound
    );
}

/// Criterion 6: Chebyshev violation frequency for the correlation
/// statistic on the identity model (m = 100, t = 1, 2000 trials) stays
/// within 0.02 + 3 se.
#[test]
fn c06_chebyshev_bound() {
    let model = ObservationModel::identity(0.0).unwrap();
    let x = random_unit_x(50, 40);
    let rep = mu_hat_concentration(&model, &x, 100, 1.0, 2000, 41).unwrap();
    assert!((rep.bound - 0.02).abs() < 1e-12);
    assert!(
        rep.tail_frequency <= rep.bound + 3.0 * rep.std_error,
        "tail frequency {} above bound {} + 3 se",
        rep.tail_frequency,
        rep.bound
    );
    println!(
        "ACCEPTANCE c06 chebyshev_bound: PASS (tail {:.4} vs bound {:.4})",
        rep.tail_frequency, rep.bound
    );
}

/// Criterion 7: latent search at the pinned recipe (100 steps, lr 0.1, 10
/// restarts) lands within 1e-4 absolute of the exact projection objective
/// on 20 linear instances (k = 5, n = 50).
#[test]
fn c07_gradient_projection_fidelity() {
    let mut worst_gap = 0.0_f64;
    for inst in 0..20u64 {
        let gen_lin = random_linear(50, 5, 3.0, 9000 + inst);
        let mut rng = Rng::new(9500 + inst);
        let mut zstar = rng.normal_vec(5);
        let nz = linalg::norm2(&zstar);
        for v in zstar.iter_mut() {
            *v *= 1.5 / nz;
        }
        let mut s = gen_lin.matrix().matvec(&zstar);
        for v in s.iter_mut() {
            *v += 0.1 * rng.next_normal();
        }
        let exact = project_exact_linear(&gen_lin, &s).unwrap();
        let gen = Generator::Linear(gen_lin);
        let cfg = ProjectionConfig::latent_adam(9800 + inst);
        assert_eq!((cfg.steps, cfg.restarts), (100, 10));
        assert_eq!(cfg.learning_rate, 0.1);
        let latent = project_latent(&gen, &s, &cfg).unwrap();
        let gap = latent.objective - exact.objective;
        worst_gap = worst_gap.max(gap);
        assert!(
            gap <= 1e-4,
            "instance {inst}: objective gap {gap} exceeds 1e-4"
        );
    }
    println!("ACCEPTANCE c07 gradient_projection_fidelity: PASS (worst gap {worst_gap:.2e})");
}

/// Criterion 8: on the synthetic MLP fixture with 1-bit observations
/// (sigma = 1, m in the k log L regime, >= 50 trials), the non-iterative
/// estimator's mean cosine is within 0.02 of the binary iterative
/// baseline's, and both beat the sparse baseline by >= 0.1.
#[test]
fn c08_qualitative_ordering() {
    let start = Instant::now();
    let gen = default_mlp_fixture(0);
    let dir = tempfile::tempdir().unwrap();
    let latent = ProjectionConfig::latent_adam(0);
    let cfg = SweepConfig {
        generator_path: String::from("<in-memory>"),
        model_kind: ModelKind::NoisyOneBit,
        sigmas: vec![1.0],
        // k ln(L r / delta) = 20 ln(3.375 * sqrt(20) / 0.01) ~ 146; m sits a
        // few multiples above it.
        m_grid: vec![400],
        trials: 50,
        estimators: vec![
            EstimatorSpec::new(EstimatorKind::OneShot, latent.clone()),
            EstimatorSpec::new(EstimatorKind::Bipg, latent.clone()),
            EstimatorSpec::new(EstimatorKind::LassoIsta, latent),
        ],
        base_seed: 50,
        output_path: dir.path().join("c08.csv").display().to_string(),
        ground_truth: GroundTruthRule::PlantedLatent,
    };
    let rows = run_sweep_with_generator(&cfg, &gen).unwrap();
    let mean = |est: &str| -> f64 {
        let vals: Vec<f64> = rows
            .iter()
            .filter(|r| r.estimator == est)
            .map(|r| r.cosine_best)
            .collect();
        assert_eq!(vals.len(), 50);
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    let one_shot_mean = mean("one_shot");
    let bipg_mean = mean("bipg");
    let lasso_mean = mean("lasso_ista");
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        one_shot_mean >= bipg_mean - 0.02,
        "one_shot {one_shot_mean:.4} below bipg {bipg_mean:.4} - 0.02"
    );
    assert!(
        one_shot_mean >= lasso_mean + 0.1,
        "one_shot {one_shot_mean:.4} not 0.1 above lasso {lasso_mean:.4}"
    );
    assert!(
        bipg_mean >= lasso_mean + 0.1,
        "bipg {bipg_mean:.4} not 0.1 above lasso {lasso_mean:.4}"
    );
    println!(
        "ACCEPTANCE c08 qualitative_ordering: PASS (one_shot {one_shot_mean:.4}, bipg {bipg_mean:.4}, lasso {lasso_mean:.4}, {elapsed:.1}s)"
    );
}

/// Criterion 9: mean error vs corruption budget nu is non-decreasing
/// (allowing one inversion) and the quadratic-fit curvature is not
/// significantly positive at 95% confidence (one-sided paired t-test).
#[test]
fn c09_corruption_linearity() {
    let gen = orthonormal_linear_fixture(400, 10, 6.0, 7);
    let model = ObservationModel::noisy_cubic(1.0).unwrap();
    let x = genrec::harness::planted_direction(&gen, 60).unwrap();
    let curve = genrec::diagnostics::noise_budget_curve(
        &model,
        &gen,
        &x,
        2000,
        &[0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
        50,
        61,
        &ProjectionConfig::exact_linear(),
    )
    .unwrap();
    for p in &curve.points {
        println!(
            "c09 curve: nu = {:.1}  mean_error = {:.4} +/- {:.4}",
            p.nu, p.mean_error, p.std_error
        );
    }
    let inversions = curve.mean_inversions();
    assert!(inversions <= 1, "{inversions} mean-error inversions");
    let (curvature, se) = curve.curvature_t_statistics().unwrap();
    assert!(
        curvature <= 1.645 * se,
        "curvature {curvature:.4} +/- {se:.4} significantly positive at 95% \
         (t = {:.2}); the l2 error curve bends convexly near the noise floor",
        curvature / se
    );
    println!(
        "ACCEPTANCE c09 corruption_linearity: PASS (inversions {inversions}, curvature {curvature:.4} +/- {se:.4})"
    );
}

/// Criterion 10: re-running a sweep with an identical config and seed
/// produces byte-identical results apart from the runtime column.
#[test]
fn c10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let gen = orthonormal_linear_fixture(60, 4, 8.0, 3);
    let mut cfg = SweepConfig {
        generator_path: String::from("<in-memory>"),
        model_kind: ModelKind::NoisyOneBit,
        sigmas: vec![0.5, 1.0],
        m_grid: vec![40, 80],
        trials: 3,
        estimators: vec![
            EstimatorSpec::new(EstimatorKind::OneShot, ProjectionConfig::exact_linear()),
            EstimatorSpec::new(EstimatorKind::Bipg, ProjectionConfig::exact_linear()),
        ],
        base_seed: 77,
        output_path: dir.path().join("a.csv").display().to_string(),
        ground_truth: GroundTruthRule::PlantedLatent,
    };
    run_sweep_with_generator(&cfg, &gen).unwrap();
    let first = std::fs::read_to_string(&cfg.output_path).unwrap();
    cfg.output_path = dir.path().join("b.csv").display().to_string();
    run_sweep_with_generator(&cfg, &gen).unwrap();
    let second = std::fs::read_to_string(&cfg.output_path).unwrap();
    assert_eq!(
        csv_without_runtime(&first),
        csv_without_runtime(&second),
        "sweep outputs differ beyond the runtime column"
    );
    assert_eq!(first.lines().count(), 2 * 2 * 3 * 2 + 1);
    println!("ACCEPTANCE c10 determinism: PASS ({} rows)", 2 * 2 * 3 * 2);
}
