//! Seeded verification suites: each suite runs `trials` independent
//! randomized checks of one inequality family and reports the worst
//! signed gap together with the trial and derived seed that produced it.
//!
//! Determinism contract: trial `t` depends only on
//! `seed::trial_seed(cfg.seed, t)`, and the worst gap is the minimum over
//! trials of a pure per-trial value, so reports are bit-identical for any
//! thread count. Gaps of inequality suites are normalized by the
//! magnitude of the quantities compared, which keeps the stated
//! tolerances meaningful across scales; a suite passes when
//! `worst_gap >= -tol`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{
    measurement_channel, monotonicity_gap, pinching, random_channel_rng, random_povm,
    MonotoneQuantity, MonotonicityInputs,
};
use crate::classical::{
    coarse_grain, f_divergence, pinsker_gap, random_probability, DivergenceFunction, Partition,
};
use crate::error::{Error, Result};
use crate::estimation::{
    cramer_rao_residual, exp_family_evolve, fisher_matrix_parts, CostKernel, EstimatorSet,
    StatisticalModel,
};
use crate::fisher::{
    center, commutator_direction, fisher_metric, hessian_fd, skew_information, tilde_identity_gap,
};
use crate::matcore::{
    matrix_function, pauli_x, random_density_rng, random_hermitian, random_traceless_hermitian,
    random_unitary, validate_density, CMat, HermitianMatrix,
};
use crate::quasient::{quantum_pinsker_gap, quasi_entropy, quasi_entropy_oracle};
use crate::seed;
use crate::stdfunc::{check_standard, hansen_mixture, log_grid, StandardFunction};
use crate::uncertainty::{gibi_margin, gram_pair, uncertainty_residual};

/// Configuration shared by every suite.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub trials: usize,
    /// Inclusive state-dimension range, cycled over trials.
    pub dims: (usize, usize),
    pub seed: u64,
    pub tol: f64,
    /// Generators exercised where a suite iterates over functions.
    pub functions: Vec<StandardFunction>,
    /// Worker threads; `None` uses the global pool. Results do not
    /// depend on this value.
    pub jobs: Option<usize>,
    /// Largest operator-family size in the uncertainty suite.
    pub max_ops: usize,
}

impl SuiteConfig {
    pub fn new(trials: usize, seed: u64, tol: f64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if tol <= 0.0 || tol.is_nan() {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(Self {
            trials,
            dims: (2, 4),
            seed,
            tol,
            functions: StandardFunction::registry(),
            jobs: None,
            max_ops: 3,
        })
    }

    pub fn with_dims(mut self, lo: usize, hi: usize) -> Result<Self> {
        if lo == 0 || hi < lo {
            return Err(Error::InvalidArgument(format!(
                "invalid dimension range {lo}..={hi}"
            )));
        }
        self.dims = (lo, hi);
        Ok(self)
    }

    pub fn with_jobs(mut self, jobs: Option<usize>) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn with_functions(mut self, functions: Vec<StandardFunction>) -> Self {
        self.functions = functions;
        self
    }

    pub fn with_max_ops(mut self, m: usize) -> Self {
        self.max_ops = m.clamp(1, 3);
        self
    }

    fn dim_for(&self, trial: u64) -> usize {
        let span = self.dims.1 - self.dims.0 + 1;
        self.dims.0 + (trial as usize) % span
    }

    fn standard_functions(&self) -> Vec<StandardFunction> {
        let std: Vec<StandardFunction> = self
            .functions
            .iter()
            .filter(|f| f.is_standard())
            .cloned()
            .collect();
        if std.is_empty() {
            StandardFunction::standard_registry()
        } else {
            std
        }
    }
}

/// Machine-readable outcome of one suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Worst signed margin across trials (suite-specific semantics).
    pub worst_gap: f64,
    /// Trial index attaining the worst gap.
    pub worst_trial: u64,
    /// Derived per-trial seed of that trial.
    pub worst_seed: u64,
    pub details: Vec<String>,
}

impl SuiteReport {
    fn from_worst(
        suite: &str,
        cfg: &SuiteConfig,
        worst: (f64, u64),
        mut extra_pass: bool,
        details: Vec<String>,
    ) -> Self {
        extra_pass &= worst.0 >= -cfg.tol;
        SuiteReport {
            suite: suite.to_string(),
            pass: extra_pass,
            trials: cfg.trials,
            seed: cfg.seed,
            tol: cfg.tol,
            worst_gap: worst.0,
            worst_trial: worst.1,
            worst_seed: seed::trial_seed(cfg.seed, worst.1),
            details,
        }
    }
}

fn pooled<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn min_pair(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// Minimum of a per-trial gap over all trials; order-independent.
fn worst_over_trials(
    cfg: &SuiteConfig,
    trial_gap: impl Fn(u64) -> Result<f64> + Sync + Send,
) -> Result<(f64, u64)> {
    pooled(cfg.jobs, || {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| trial_gap(t).map(|g| (g, t)))
            .try_reduce(|| (f64::INFINITY, u64::MAX), |a, b| Ok(min_pair(a, b)))
    })?
}

fn scale3(a: f64, b: f64, c: f64) -> f64 {
    a.abs().max(b.abs()).max(c.abs()).max(1.0)
}

// ---------------------------------------------------------------------------
// 1. closed form vs superoperator oracle
// ---------------------------------------------------------------------------

/// Worst gap: −(max relative error between closed form and oracle).
pub fn run_oracle_equivalence(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let worst = worst_over_trials(cfg, |t| {
        let mut rng = seed::trial_rng(cfg.seed, t);
        let dim = cfg.dim_for(t).min(crate::quasient::ORACLE_MAX_DIM);
        let rho1 = random_density_rng(dim, 1e-6, &mut rng);
        let rho2 = random_density_rng(dim, 1e-6, &mut rng);
        let a = random_hermitian(dim, &mut rng);
        let mut gap = f64::INFINITY;
        for f in &cfg.functions {
            let closed = quasi_entropy(&rho1, &rho2, a.mat(), f)?;
            let oracle = quasi_entropy_oracle(&rho1, &rho2, a.mat(), f)?;
            let rel = (closed - oracle).abs() / oracle.abs().max(1.0);
            gap = gap.min(-rel);
        }
        Ok(gap)
    })?;
    Ok(SuiteReport::from_worst(
        "oracle-equivalence",
        cfg,
        worst,
        true,
        vec!["gap = -(relative error closed form vs superoperator oracle)".into()],
    ))
}

// ---------------------------------------------------------------------------
// 2. classical partition monotonicity
// ---------------------------------------------------------------------------

pub fn run_classical_monotonicity(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let registry = DivergenceFunction::registry();
    let worst = worst_over_trials(cfg, |t| {
        let mut rng = seed::trial_rng(cfg.seed, t);
        let n = 2 + (t as usize) % 7;
        let p = random_probability(n, &mut rng);
        let q = random_probability(n, &mut rng);
        let part = Partition::random(n, n, &mut rng);
        let pa = coarse_grain(&p, &part)?;
        let qa = coarse_grain(&q, &part)?;
        let mut gap = f64::INFINITY;
        for f in &registry {
            let fine = f_divergence(&p, &q, f)?;
            let coarse = f_divergence(&pa, &qa, f)?;
            if fine.is_finite() {
                gap = gap.min(fine - coarse);
            }
        }
        Ok(gap)
    })?;
    Ok(SuiteReport::from_worst(
        "classical-monotonicity",
        cfg,
        worst,
        true,
        vec![format!("{} divergence functions", registry.len())],
    ))
}

// ---------------------------------------------------------------------------
// 3. quantum monotonicity under random channels
// ---------------------------------------------------------------------------

pub fn run_quantum_monotonicity(
    cfg: &SuiteConfig,
    quantity: MonotoneQuantity,
) -> Result<SuiteReport> {
    let worst = worst_over_trials(cfg, |t| {
        let mut rng = seed::trial_rng(cfg.seed, t);
        let dim = cfg.dim_for(t);
        let ch = random_channel_rng(dim, dim, 2, &mut rng)?;
        match quantity {
            MonotoneQuantity::Quasi => {
                let rho1 = random_density_rng(dim, 1e-4, &mut rng);
                let rho2 = random_density_rng(dim, 1e-4, &mut rng);
                let a = random_hermitian(dim, &mut rng);
                let mut gap = f64::INFINITY;
                for f in &cfg.functions {
                    let g = monotonicity_gap(
                        MonotoneQuantity::Quasi,
                        MonotonicityInputs::Quasi {
                            rho1: &rho1,
                            rho2: &rho2,
                            a: a.mat(),
                        },
                        f,
                        &ch,
                    )?;
                    gap = gap.min(g);
                }
                Ok(gap)
            }
            MonotoneQuantity::Fisher => {
                let rho = random_density_rng(dim, 1e-4, &mut rng);
                let a = random_traceless_hermitian(dim, &mut rng);
                let mut gap = f64::INFINITY;
                for f in cfg.standard_functions() {
                    let fine = fisher_metric(&rho, &f, a.mat(), a.mat())?.re;
                    let g = monotonicity_gap(
                        MonotoneQuantity::Fisher,
                        MonotonicityInputs::Fisher { rho: &rho, a: &a },
                        &f,
                        &ch,
                    )?;
                    gap = gap.min(g / fine.abs().max(1.0));
                }
                Ok(gap)
            }
            MonotoneQuantity::FisherMatrix => {
                let rho0 = random_density_rng(dim, 1e-2, &mut rng);
                let gens: Vec<HermitianMatrix> = (0..2)
                    .map(|_| {
                        HermitianMatrix::symmetrized(
                            &random_traceless_hermitian(dim, &mut rng).mat().scale(0.1),
                        )
                    })
                    .collect();
                let model = StatisticalModel::affine(rho0, gens)?;
                let mut gap = f64::INFINITY;
                for f in cfg.standard_functions() {
                    let g = monotonicity_gap(
                        MonotoneQuantity::FisherMatrix,
                        MonotonicityInputs::FisherMatrix {
                            model: &model,
                            theta: &[0.0, 0.0],
                        },
                        &f,
                        &ch,
                    )?;
                    gap = gap.min(g);
                }
                Ok(gap)
            }
        }
    })?;

    // pinching on a commuting pair must be lossless
    let mut details = Vec::new();
    let mut equality_pass = true;
    if quantity == MonotoneQuantity::Quasi {
        for dim in cfg.dims.0..=cfg.dims.1 {
            let mut rng = seed::trial_rng(cfg.seed ^ 0x70c0_ffee, dim as u64);
            let u = random_unitary(dim, &mut rng);
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let p = random_probability(dim, rng);
                let diag = HermitianMatrix::from_real_diagonal(p.weights());
                validate_density(
                    HermitianMatrix::symmetrized(&(&u * diag.mat() * u.adjoint())),
                    0.0,
                )
                .expect("unitary conjugate of a distribution")
            };
            let rho1 = mk(&mut rng);
            let rho2 = mk(&mut rng);
            let part = Partition::random(dim, dim, &mut rng);
            let ch = pinching(&u, &part)?;
            let gap = monotonicity_gap(
                MonotoneQuantity::Quasi,
                MonotonicityInputs::Quasi {
                    rho1: &rho1,
                    rho2: &rho2,
                    a: &CMat::identity(dim, dim),
                },
                &StandardFunction::XLogX,
                &ch,
            )?;
            let ok = gap.abs() <= 1e-10;
            equality_pass &= ok;
            details.push(format!(
                "pinching equality dim {dim}: |gap| = {:.3e} ({})",
                gap.abs(),
                if ok { "ok" } else { "VIOLATED" }
            ));
        }
    }

    let name = match quantity {
        MonotoneQuantity::Quasi => "monotonicity-quasi",
        MonotoneQuantity::Fisher => "monotonicity-fisher",
        MonotoneQuantity::FisherMatrix => "monotonicity-fishermatrix",
    };
    Ok(SuiteReport::from_worst(
        name,
        cfg,
        worst,
        equality_pass,
        details,
    ))
}

// ---------------------------------------------------------------------------
// 4. Pinsker gaps, classical and quantum
// ---------------------------------------------------------------------------

pub fn run_pinsker(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let worst = worst_over_trials(cfg, |t| {
        let mut rng = seed::trial_rng(cfg.seed, t);
        let n = 2 + (t as usize) % 7;
        let p = random_probability(n, &mut rng);
        let q = random_probability(n, &mut rng);
        let classical = pinsker_gap(&p, &q)?;
        let dim = cfg.dim_for(t);
        let rho1 = random_density_rng(dim, 1e-6, &mut rng);
        let rho2 = random_density_rng(dim, 1e-6, &mut rng);
        let quantum = quantum_pinsker_gap(&rho1, &rho2)?;
        Ok(classical.min(quantum))
    })?;
    Ok(SuiteReport::from_worst(
        "pinsker",
        cfg,
        worst,
        true,
        vec!["classical and quantum gaps per trial".into()],
    ))
}

// ---------------------------------------------------------------------------
// 5. hand-computed fixtures
// ---------------------------------------------------------------------------

/// Worst gap: minimum over fixtures of 1 − error/allowance.
pub fn run_fixtures(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let rho = validate_density(
        HermitianMatrix::from_real_diagonal(&[0.75, 0.25]),
        crate::matcore::DEFAULT_FLOOR,
    )?;
    let sx = pauli_x();

    let g_sld = fisher_metric(&rho, &StandardFunction::Sld, sx.mat(), sx.mat())?.re;
    let g_km = fisher_metric(&rho, &StandardFunction::KuboMori, sx.mat(), sx.mat())?.re;
    let wy = skew_information(&rho, &StandardFunction::Wyd(0.5), &sx)?;

    let checks = [
        ("gamma_sld(sigma_x) = 4", (g_sld - 4.0).abs(), 1e-10),
        (
            "gamma_km(sigma_x) = 4 ln 3",
            (g_km - 4.0 * 3f64.ln()).abs(),
            1e-10,
        ),
        ("wy skew = 0.133975", (wy - 0.133_975).abs(), 1e-6),
        (
            "wy skew = 1 - sqrt(3)/2",
            (wy - (1.0 - 3f64.sqrt() / 2.0)).abs(),
            1e-10,
        ),
    ];
    let mut worst = f64::INFINITY;
    let mut details = Vec::new();
    for (name, err, allowed) in checks {
        let margin = 1.0 - err / allowed;
        worst = worst.min(margin);
        details.push(format!("{name}: error {err:.3e} (allowed {allowed:.1e})"));
    }
    Ok(SuiteReport::from_worst(
        "fixtures",
        cfg,
        (worst, 0),
        true,
        details,
    ))
}

// ---------------------------------------------------------------------------
// 6. the f-tilde program
// ---------------------------------------------------------------------------

pub fn run_tilde_program(cfg: &SuiteConfig) -> Result<SuiteReport> {
    // every registry f̃ must certify as standard
    let mut details = Vec::new();
    let mut gates = true;
    for f in StandardFunction::standard_registry() {
        let t = f.tilde()?;
        let report = check_standard(&t, 100, 4)?;
        gates &= report.pass();
        details.push(format!(
            "check_standard {}: {}",
            t.name(),
            if report.pass() { "pass" } else { "FAIL" }
        ));
    }

    // randomized tilde-identity trials; gap = −identity gap
    let worst = worst_over_trials(cfg, |t| {
        let mut rng = seed::trial_rng(cfg.seed, t);
        let dim = cfg.dim_for(t);
        let rho = random_density_rng(dim, 1e-4, &mut rng);
        let x = random_hermitian(dim, &mut rng);
        let mut gap = f64::INFINITY;
        for f in cfg.standard_functions() {
            gap = gap.min(-tilde_identity_gap(&rho, &f, &x)?);
        }
        Ok(gap)
    })?;

    // Hessian: finite differences of S_f̃ against f(0)γ^f, plus the
    // second-order step study. The convergence order is a property of the
    // stencil, so it runs on a fixed well-conditioned qubit fixture whose
    // truncation coefficient dominates rounding (random states can land
    // where the h² term vanishes and the ratio is pure noise).
    let rho = validate_density(
        HermitianMatrix::new(CMat::from_row_slice(
            2,
            2,
            &[
                nalgebra::Complex::new(0.7, 0.0),
                nalgebra::Complex::new(0.1, 0.05),
                nalgebra::Complex::new(0.1, -0.05),
                nalgebra::Complex::new(0.3, 0.0),
            ],
        ))
        .expect("hessian fixture state"),
        0.0,
    )?;
    let raw = HermitianMatrix::new(CMat::from_row_slice(
        2,
        2,
        &[
            nalgebra::Complex::new(0.3, 0.0),
            nalgebra::Complex::new(0.8, -0.2),
            nalgebra::Complex::new(0.8, 0.2),
            nalgebra::Complex::new(-0.4, 0.0),
        ],
    ))
    .expect("hessian fixture observable");
    let x = HermitianMatrix::symmetrized(&raw.mat().scale(1.0 / raw.frobenius_norm()));
    for f in [StandardFunction::Sld, StandardFunction::Wyd(0.5)] {
        let tilde = f.tilde()?;
        let (xc, _) = center(&rho, &x);
        let d = commutator_direction(&rho, &xc);
        let exact = f.at_zero() * fisher_metric(&rho, &f, d.mat(), d.mat())?.re;
        let fd = hessian_fd(&rho, &x, &tilde, 1e-4)?;
        let rel = (fd - exact).abs() / exact.abs().max(1e-12);
        let ok = rel < 1e-3;
        gates &= ok;
        details.push(format!(
            "hessian {} rel err {rel:.3e} at h=1e-4 ({})",
            f.name(),
            if ok { "ok" } else { "FAIL" }
        ));
    }
    {
        let f = StandardFunction::Wyd(0.5);
        let tilde = f.tilde()?;
        let (xc, _) = center(&rho, &x);
        let d = commutator_direction(&rho, &xc);
        let exact = f.at_zero() * fisher_metric(&rho, &f, d.mat(), d.mat())?.re;
        let e1 = (hessian_fd(&rho, &x, &tilde, 4e-3)? - exact).abs();
        let e2 = (hessian_fd(&rho, &x, &tilde, 2e-3)? - exact).abs();
        let ratio = e1 / e2.max(1e-300);
        let ok = (3.0..5.0).contains(&ratio);
        gates &= ok;
        details.push(format!(
            "hessian step halving error ratio {ratio:.2} ({})",
            if ok {
                "second order"
            } else {
                "NOT second order"
            }
        ));
    }

    Ok(SuiteReport::from_worst(
        "tilde-program",
        cfg,
        worst,
        gates,
        details,
    ))
}

// ---------------------------------------------------------------------------
// 7. metric ordering and the Hansen envelope
// ---------------------------------------------------------------------------

pub fn run_metric_ordering(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let worst = worst_over_trials(cfg, |t| {
        let mut rng = seed::trial_rng(cfg.seed, t);
        let dim = cfg.dim_for(t);
        let rho = random_density_rng(dim, 1e-4, &mut rng);
        let a = random_traceless_hermitian(dim, &mut rng);
        let lo = fisher_metric(&rho, &StandardFunction::Sld, a.mat(), a.mat())?.re;
        let hi = fisher_metric(&rho, &StandardFunction::Harmonic, a.mat(), a.mat())?.re;

        let mut fns = cfg.standard_functions();
        // a fresh random Hansen mixture per trial must land in the envelope
        let nodes: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
        let mut weights: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 0.05).collect();
        let s: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= s);
        fns.push(hansen_mixture(&nodes, &weights)?);

        let mut gap = f64::INFINITY;
        for f in &fns {
            let g = fisher_metric(&rho, f, a.mat(), a.mat())?.re;
            let scale = scale3(lo, g, hi);
            gap = gap.min((g - lo) / scale).min((hi - g) / scale);
        }
        Ok(gap)
    })?;
    Ok(SuiteReport::from_worst(
        "metric-ordering",
        cfg,
        worst,
        true,
        vec!["gap normalized by metric magnitude".into()],
    ))
}

// ---------------------------------------------------------------------------
// 8. Cramér–Rao: equality models and PSD residuals
// ---------------------------------------------------------------------------

pub fn run_cramer_rao(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let std_fns = cfg.standard_functions();
    let worst = worst_over_trials(cfg, |t| {
        let mut rng = seed::trial_rng(cfg.seed, t);
        let dim = 2 + (t as usize) % 2;
        let f = std_fns[(t as usize) % std_fns.len()].clone();
        let cost = CostKernel::Monotone(f);
        let (model, theta): (StatisticalModel, Vec<f64>) = match t % 3 {
            0 => {
                let rho0 = random_density_rng(dim, 1e-2, &mut rng);
                let gens: Vec<HermitianMatrix> = (0..2)
                    .map(|_| {
                        HermitianMatrix::symmetrized(
                            &random_traceless_hermitian(dim, &mut rng).mat().scale(0.1),
                        )
                    })
                    .collect();
                (StatisticalModel::affine(rho0, gens)?, vec![0.0, 0.0])
            }
            1 => {
                let rho0 = random_density_rng(dim, 1e-2, &mut rng);
                let t1 = random_hermitian(dim, &mut rng);
                (
                    StatisticalModel::sld_exponential(rho0, vec![t1])?,
                    vec![0.0],
                )
            }
            _ => {
                let rho0 = random_density_rng(dim, 1e-2, &mut rng);
                let h = matrix_function(rho0.hermitian(), f64::ln)?;
                let t1 = random_hermitian(dim, &mut rng);
                (StatisticalModel::km_exponential(h, vec![t1])?, vec![0.0])
            }
        };
        let m = model.param_count();
        let est = EstimatorSet::new((0..m).map(|_| random_hermitian(dim, &mut rng)).collect())?;
        let r = cramer_rao_residual(&model, &est, &theta, &cost)?;
        let min_eig = crate::channels::min_symmetric_eigenvalue(&r);
        Ok(min_eig / r.norm().max(1.0))
    })?;

    // deterministic equality fixtures
    let mut details = Vec::new();
    let mut gates = true;
    {
        let mut rng = seed::rng_from(cfg.seed ^ 0xc1a0);
        // affine with the Hilbert–Schmidt cost
        let rho0 = random_density_rng(2, 1e-2, &mut rng);
        let b = random_traceless_hermitian(2, &mut rng);
        let tr_b2 = (b.mat().adjoint() * b.mat()).trace().re;
        let a = HermitianMatrix::symmetrized(&b.mat().scale(1.0 / tr_b2));
        let model = StatisticalModel::affine(rho0, vec![b])?;
        let r = cramer_rao_residual(
            &model,
            &EstimatorSet::new(vec![a])?,
            &[0.0],
            &CostKernel::HilbertSchmidt,
        )?;
        let ok = r[(0, 0)].abs() < 1e-8;
        gates &= ok;
        details.push(format!(
            "affine/HS equality residual {:.3e} ({})",
            r[(0, 0)],
            if ok { "ok" } else { "FAIL" }
        ));

        // SLD exponential family with its natural estimator
        let rho0 = random_density_rng(2, 1e-2, &mut rng);
        let raw = random_hermitian(2, &mut rng);
        let (c, _) = center(&rho0, &raw);
        let norm = (rho0.mat() * c.mat() * c.mat()).trace().re.sqrt();
        let t1 = HermitianMatrix::symmetrized(&c.mat().scale(1.0 / norm));
        let model = StatisticalModel::sld_exponential(rho0, vec![t1.clone()])?;
        let r = cramer_rao_residual(
            &model,
            &EstimatorSet::new(vec![t1])?,
            &[0.0],
            &CostKernel::Monotone(StandardFunction::Sld),
        )?;
        let ok = r[(0, 0)].abs() < 1e-8;
        gates &= ok;
        details.push(format!(
            "sld-exp equality residual {:.3e} ({})",
            r[(0, 0)],
            if ok { "ok" } else { "FAIL" }
        ));

        // Kubo–Mori exponential family
        let rho0 = random_density_rng(2, 1e-2, &mut rng);
        let h = matrix_function(rho0.hermitian(), f64::ln)?;
        let raw = random_hermitian(2, &mut rng);
        let (t1, _) = center(&rho0, &raw);
        let n =
            crate::fisher::quadratic_cost(&rho0, &StandardFunction::KuboMori, t1.mat(), t1.mat())?
                .re;
        let a = HermitianMatrix::symmetrized(&t1.mat().scale(1.0 / n));
        let model = StatisticalModel::km_exponential(h, vec![t1])?;
        let r = cramer_rao_residual(
            &model,
            &EstimatorSet::new(vec![a])?,
            &[0.0],
            &CostKernel::Monotone(StandardFunction::KuboMori),
        )?;
        let ok = r[(0, 0)].abs() < 1e-8;
        gates &= ok;
        details.push(format!(
            "km-exp equality residual {:.3e} ({})",
            r[(0, 0)],
            if ok { "ok" } else { "FAIL" }
        ));
    }

    Ok(SuiteReport::from_worst(
        "cramer-rao",
        cfg,
        worst,
        gates,
        details,
    ))
}

// ---------------------------------------------------------------------------
// 9. exponential-family ODE vs closed forms
// ---------------------------------------------------------------------------

/// Worst gap: minimum over checks of 1 − error/allowance.
pub fn run_exp_ode(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let reps = cfg.trials.clamp(1, 5);
    let mut worst = (f64::INFINITY, 0u64);
    let mut details = Vec::new();
    for rep in 0..reps as u64 {
        let mut rng = seed::trial_rng(cfg.seed, rep);
        let rho0 = random_density_rng(3, 1e-3, &mut rng);
        let t = random_hermitian(3, &mut rng);

        let path = exp_family_evolve(&rho0, &t, 0.5, &StandardFunction::Sld, 200)?;
        let e = matrix_function(
            &HermitianMatrix::symmetrized(&t.mat().scale(0.25)),
            f64::exp,
        )?;
        let want = e.mat() * rho0.mat() * e.mat();
        let sld_err = (path.final_unnormalized().mat() - &want).norm() / want.norm();

        let h = matrix_function(rho0.hermitian(), f64::ln)?;
        let path = exp_family_evolve(&rho0, &t, 0.5, &StandardFunction::KuboMori, 200)?;
        let want = matrix_function(
            &HermitianMatrix::symmetrized(&(h.mat() + t.mat().scale(0.5))),
            f64::exp,
        )?;
        let km_err = (path.final_unnormalized().mat() - want.mat()).norm() / want.frobenius_norm();

        // commuting generator: exact solution e^{θT} ρ₀
        let sd = rho0.spectral();
        let tc = HermitianMatrix::symmetrized(&sd.from_eigenbasis(&CMat::from_fn(3, 3, |i, j| {
            if i == j {
                nalgebra::Complex::new(0.3 * (i as f64 - 1.0), 0.0)
            } else {
                nalgebra::Complex::new(0.0, 0.0)
            }
        })));
        let path = exp_family_evolve(&rho0, &tc, 0.5, &StandardFunction::Wyd(0.5), 200)?;
        let expm = matrix_function(
            &HermitianMatrix::symmetrized(&tc.mat().scale(0.5)),
            f64::exp,
        )?;
        let want = expm.mat() * rho0.mat();
        let comm_err = (path.final_unnormalized().mat() - &want).norm() / want.norm();

        for (name, err, allowed) in [
            ("sld flow", sld_err, 1e-6),
            ("km flow", km_err, 1e-6),
            ("commuting flow", comm_err, 1e-8),
        ] {
            let margin = 1.0 - err / allowed;
            worst = min_pair(worst, (margin, rep));
            if rep == 0 {
                details.push(format!("{name}: rel err {err:.3e} (allowed {allowed:.1e})"));
            }
        }
    }
    Ok(SuiteReport::from_worst(
        "exp-ode", cfg, worst, true, details,
    ))
}

// ---------------------------------------------------------------------------
// 10. Fisher-matrix monotonicity and measurement reduction
// ---------------------------------------------------------------------------

pub fn run_fisher_matrix(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let std_fns = cfg.standard_functions();
    let worst = worst_over_trials(cfg, |t| {
        let mut rng = seed::trial_rng(cfg.seed, t);
        let dim = cfg.dim_for(t);
        let f = std_fns[(t as usize) % std_fns.len()].clone();

        // transported Fisher matrix of a two-parameter affine model
        let rho0 = random_density_rng(dim, 1e-2, &mut rng);
        let gens: Vec<HermitianMatrix> = (0..2)
            .map(|_| {
                HermitianMatrix::symmetrized(
                    &random_traceless_hermitian(dim, &mut rng).mat().scale(0.1),
                )
            })
            .collect();
        let model = StatisticalModel::affine(rho0.clone(), gens)?;
        let ch = random_channel_rng(dim, dim, 2, &mut rng)?;
        let fine = fisher_matrix_parts(
            &rho0,
            &model.tangents_at(&[0.0, 0.0])?,
            &CostKernel::Monotone(f.clone()),
        )?;
        let gap_mono = monotonicity_gap(
            MonotoneQuantity::FisherMatrix,
            MonotonicityInputs::FisherMatrix {
                model: &model,
                theta: &[0.0, 0.0],
            },
            &f,
            &ch,
        )? / fine.norm().max(1.0);

        // measurement map: classical Fisher of outcome probabilities
        let b = HermitianMatrix::symmetrized(
            &random_traceless_hermitian(dim, &mut rng).mat().scale(0.1),
        );
        let povm = random_povm(dim, dim + 1, &mut rng);
        let mch = measurement_channel(&povm)?;
        let classical: f64 = povm
            .iter()
            .map(|fj| {
                let p = (rho0.mat() * fj.mat()).trace().re;
                let dp = (b.mat() * fj.mat()).trace().re;
                dp * dp / p
            })
            .sum();
        let out = mch.apply(&rho0)?.density;
        let moved = HermitianMatrix::symmetrized(&mch.apply_matrix(b.mat())?);
        let transported =
            fisher_matrix_parts(&out, &[moved], &CostKernel::Monotone(f.clone()))?[(0, 0)];
        let sld_info = fisher_metric(&rho0, &StandardFunction::Sld, b.mat(), b.mat())?.re;

        let scale = scale3(classical, transported, sld_info);
        let gap_eq = -(classical - transported).abs() / scale;
        let gap_dom = (sld_info - classical) / scale;
        Ok(gap_mono.min(gap_eq).min(gap_dom))
    })?;
    Ok(SuiteReport::from_worst(
        "fisher-matrix",
        cfg,
        worst,
        true,
        vec![
            "per trial: transported-matrix monotonicity, classical = diagonal-model Fisher, \
             classical <= SLD Fisher"
                .into(),
        ],
    ))
}

// ---------------------------------------------------------------------------
// 11. determinant uncertainty
// ---------------------------------------------------------------------------

pub fn run_uncertainty(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let std_fns = cfg.standard_functions();
    let pair_count = std_fns.len() * std_fns.len();
    let worst = worst_over_trials(cfg, |t| {
        let mut rng = seed::trial_rng(cfg.seed, t);
        let dim = cfg.dim_for(t);
        let m = 1 + (t as usize) % cfg.max_ops;
        let rho = random_density_rng(dim, 1e-4, &mut rng);
        let ops: Vec<HermitianMatrix> = (0..m).map(|_| random_hermitian(dim, &mut rng)).collect();
        let k = (t as usize) % pair_count;
        let f = &std_fns[k / std_fns.len()];
        let g = &std_fns[k % std_fns.len()];
        let pair = gram_pair(&rho, f, g, &ops)?;
        let residual = uncertainty_residual(&rho, f, g, &ops)?;
        let det_scale = pair
            .cov
            .determinant()
            .abs()
            .max(pair.skew.determinant().abs())
            .max(1.0);
        Ok(residual / det_scale)
    })?;

    // scalar margin sweep across the registry pairs
    let mut margin_worst = f64::INFINITY;
    for f in &std_fns {
        for g in &std_fns {
            for x in log_grid(1e-4, 1e4, 400) {
                margin_worst = margin_worst.min(gibi_margin(f, g, x)?);
            }
        }
    }
    let gates = margin_worst >= -1e-12;
    let details = vec![format!(
        "scalar f(x)g(x) >= f(0)g(0)(x-1)^2 sweep: worst margin {margin_worst:.3e} ({})",
        if gates { "ok" } else { "VIOLATED" }
    )];
    Ok(SuiteReport::from_worst(
        "uncertainty",
        cfg,
        worst,
        gates,
        details,
    ))
}

// ---------------------------------------------------------------------------
// 12. determinism across thread counts
// ---------------------------------------------------------------------------

pub fn run_determinism(cfg: &SuiteConfig) -> Result<SuiteReport> {
    type Pilot = (&'static str, fn(&SuiteConfig) -> Result<SuiteReport>);
    fn quasi(cfg: &SuiteConfig) -> Result<SuiteReport> {
        run_quantum_monotonicity(cfg, MonotoneQuantity::Quasi)
    }
    let pilots: [Pilot; 4] = [
        ("monotonicity-quasi", quasi),
        ("pinsker", run_pinsker),
        ("metric-ordering", run_metric_ordering),
        ("uncertainty", run_uncertainty),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (name, runner) in pilots {
        let base = SuiteConfig {
            trials: cfg.trials.min(50),
            tol: 1e-6,
            ..cfg.clone()
        };
        let reports: Vec<SuiteReport> = [Some(1), Some(4), Some(2), Some(1)]
            .into_iter()
            .map(|jobs| runner(&base.clone().with_jobs(jobs)))
            .collect::<Result<_>>()?;
        let reference = &reports[0];
        let identical = reports.iter().all(|r| {
            r.worst_gap.to_bits() == reference.worst_gap.to_bits()
                && r.worst_trial == reference.worst_trial
        });
        pass &= identical;
        details.push(format!(
            "{name}: worst gap {:.17e} at trial {} across jobs 1/4/2/1 ({})",
            reference.worst_gap,
            reference.worst_trial,
            if identical {
                "bit-identical"
            } else {
                "MISMATCH"
            }
        ));
    }
    Ok(SuiteReport {
        suite: "determinism".into(),
        pass,
        trials: cfg.trials.min(50),
        seed: cfg.seed,
        tol: cfg.tol,
        worst_gap: if pass { 0.0 } else { -1.0 },
        worst_trial: 0,
        worst_seed: seed::trial_seed(cfg.seed, 0),
        details,
    })
}
