//! `qig` — compute quantum information geometry quantities and run the
//! named verification suites.
//!
//! Exit codes: 0 success / all gates passed; 1 an inequality gate was
//! violated in `verify`; 2 invalid input (bad flags, malformed files,
//! failed validation).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qig_core::nalgebra::DMatrix;
use serde_json::{json, Value};

use qig_core::channels::MonotoneQuantity;
use qig_core::classical::{f_divergence, DivergenceFunction, ProbabilityVectorFile};
use qig_core::estimation::{
    cramer_rao_residual, exp_family_evolve, fisher_matrix, CostKernel, EstimatorSet, ModelFile,
    StatisticalModel,
};
use qig_core::fisher::{fisher_metric, quadratic_cost, skew_information};
use qig_core::matcore::{
    random_density_rng, random_hermitian, random_traceless_hermitian, validate_density,
    HermitianMatrix, MatrixFile, DEFAULT_FLOOR,
};
use qig_core::quasient::{generalized_covariance, quasi_entropy};
use qig_core::stdfunc::{MixtureFile, StandardFunction};
use qig_core::suites::{self, SuiteConfig, SuiteReport};
use qig_core::{seed, Error};

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Parser)]
#[command(
    name = "qig",
    about = "Quantum quasi-entropies, monotone Fisher metrics, and inequality certification",
    version
)]
struct Cli {
    /// Master seed for anything randomized.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Write the JSON report to this file as well as stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Rescale logarithmic outputs by 1/ln 2 (divergence and quasi).
    #[arg(long, global = true)]
    bits: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classical f-divergence of two probability vectors.
    Divergence {
        /// `kl | variational | hellinger | alpha:<a> | sympow:<s> | ov:<b>`
        #[arg(long)]
        f: String,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
    /// Quasi-entropy S_f^A(rho1 || rho2); A defaults to the identity.
    Quasi {
        #[arg(long)]
        f: String,
        #[arg(long)]
        rho1: PathBuf,
        #[arg(long)]
        rho2: PathBuf,
        #[arg(long = "A")]
        a: Option<PathBuf>,
    },
    /// Monotone Fisher metric gamma_rho^f(A, B).
    Fisher(MetricArgs),
    /// Quadratic cost Tr A* J_rho(B).
    Cost(MetricArgs),
    /// Generalized covariance qCov_rho^f(A, B).
    Covariance(MetricArgs),
    /// Skew information `(f(0)/2) gamma^f(i[rho,X], i[rho,X])`.
    Skew {
        #[arg(long)]
        f: String,
        #[arg(long)]
        rho: PathBuf,
        #[arg(long = "A")]
        a: PathBuf,
    },
    /// Cramér–Rao residual for a model and estimator set.
    CramerRao {
        /// `affine | sld-exp | km-exp | file:<model.json>`
        #[arg(long)]
        model: String,
        /// `hs` | any standard-function selector
        #[arg(long)]
        f: String,
        /// Evaluation point, one value per parameter.
        #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "0")]
        theta: Vec<f64>,
        /// State dimension for the built-in seeded models.
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Integrate the exponential-family flow D' = J_D(T).
    Evolve {
        #[arg(long)]
        f: String,
        #[arg(long)]
        rho0: PathBuf,
        #[arg(long = "T")]
        t: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        theta_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Run a named verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct MetricArgs {
    /// Standard-function selector: `sld | harmonic | km | wyd:<b> |
    /// extremal:<l> | sqrt | mixture:<file>`
    #[arg(long)]
    f: String,
    #[arg(long)]
    rho: PathBuf,
    #[arg(long = "A")]
    a: PathBuf,
    /// Defaults to A.
    #[arg(long = "B")]
    b: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Oracle,
    ClassicalMonotonicity,
    Monotonicity,
    Pinsker,
    Fixtures,
    Tilde,
    MetricOrder,
    CramerRao,
    Ode,
    FisherMatrix,
    Uncertainty,
    Determinism,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum QuantityArg {
    Quasi,
    Fisher,
    Fishermatrix,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteName,
    /// Monotone quantity for the `monotonicity` suite.
    #[arg(long, value_enum, default_value = "quasi")]
    quantity: QuantityArg,
    /// Restrict the suite to one generator.
    #[arg(long)]
    f: Option<String>,
    /// Trial count (suite default when omitted).
    #[arg(long)]
    trials: Option<usize>,
    /// Lower state dimension (and upper unless --dim-max is given).
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    dim_max: Option<usize>,
    /// Gate tolerance (suite default when omitted).
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads for the trial loop; results are independent of it.
    #[arg(long)]
    jobs: Option<usize>,
    /// Largest operator-family size in the uncertainty suite.
    #[arg(long, default_value_t = 3)]
    m: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok((mut report, pass)) => {
            if let Value::Object(map) = &mut report {
                map.insert(
                    "wall_time_ms".into(),
                    json!(started.elapsed().as_secs_f64() * 1e3),
                );
            }
            let text = serde_json::to_string_pretty(&report).expect("report serialization");
            println!("{text}");
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("error: cannot write report to {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// JSON has no infinity literal; divergences may legitimately be +∞,
/// so non-finite values are encoded as the strings "inf" / "-inf".
fn json_extended(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn run(cli: &Cli) -> CliResult<(Value, bool)> {
    let base = |fields: Value| -> Value {
        let mut obj = json!({
            "command": command_echo(),
            "seed": cli.seed,
        });
        if let (Value::Object(dst), Value::Object(src)) = (&mut obj, fields) {
            for (k, v) in src {
                dst.insert(k, v);
            }
        }
        obj
    };

    match &cli.command {
        Command::Divergence { f, p, q } => {
            let f = DivergenceFunction::parse(f)?;
            let p = ProbabilityVectorFile::parse(&read(p)?)?;
            let q = ProbabilityVectorFile::parse(&read(q)?)?;
            let mut value = f_divergence(&p, &q, &f)?;
            if cli.bits {
                value /= LN_2;
            }
            Ok((
                base(json!({"function": f.name(), "value": json_extended(value)})),
                true,
            ))
        }
        Command::Quasi { f, rho1, rho2, a } => {
            let f = parse_standard(f)?;
            let rho1 = read_density(rho1)?;
            let rho2 = read_density(rho2)?;
            let a = match a {
                Some(path) => read_matrix(path)?,
                None => qig_core::CMat::identity(rho1.dim(), rho1.dim()),
            };
            let mut value = quasi_entropy(&rho1, &rho2, &a, &f)?;
            if cli.bits {
                value /= LN_2;
            }
            Ok((base(json!({"function": f.name(), "value": value})), true))
        }
        Command::Fisher(args) => metric_like(args, &base, MetricKind::Fisher),
        Command::Cost(args) => metric_like(args, &base, MetricKind::Cost),
        Command::Covariance(args) => metric_like(args, &base, MetricKind::Covariance),
        Command::Skew { f, rho, a } => {
            let f = parse_standard(f)?;
            let rho = read_density(rho)?;
            let a = HermitianMatrix::new(read_matrix(a)?)?;
            let value = skew_information(&rho, &f, &a)?;
            let sd = rho.spectral();
            Ok((
                base(json!({
                    "value": value,
                    "kernel": f.name(),
                    "basis": MatrixFile::from_matrix(sd.basis()),
                })),
                true,
            ))
        }
        Command::CramerRao {
            model,
            f,
            theta,
            dim,
        } => cramer_rao_cmd(cli, &base, model, f, theta, *dim),
        Command::Evolve {
            f,
            rho0,
            t,
            theta_max,
            steps,
        } => {
            let f = parse_standard(f)?;
            let rho0 = read_density(rho0)?;
            let t = HermitianMatrix::new(read_matrix(t)?)?;
            let path = exp_family_evolve(&rho0, &t, *theta_max, &f, *steps)?;
            Ok((
                base(json!({
                    "kernel": f.name(),
                    "theta_max": theta_max,
                    "steps": steps,
                    "final_unnormalized": MatrixFile::from_matrix(path.final_unnormalized().mat()),
                    "final_state": MatrixFile::from_matrix(path.final_state().mat()),
                })),
                true,
            ))
        }
        Command::Verify(args) => verify_cmd(cli, &base, args),
    }
}

enum MetricKind {
    Fisher,
    Cost,
    Covariance,
}

fn metric_like(
    args: &MetricArgs,
    base: &dyn Fn(Value) -> Value,
    kind: MetricKind,
) -> CliResult<(Value, bool)> {
    let f = parse_standard(&args.f)?;
    let rho = read_density(&args.rho)?;
    let a = read_matrix(&args.a)?;
    let b = match &args.b {
        Some(path) => read_matrix(path)?,
        None => a.clone(),
    };
    let value = match kind {
        MetricKind::Fisher => fisher_metric(&rho, &f, &a, &b)?,
        MetricKind::Cost => quadratic_cost(&rho, &f, &a, &b)?,
        MetricKind::Covariance => generalized_covariance(&rho, &a, &b, &f)?,
    };
    let sd = rho.spectral();
    Ok((
        base(json!({
            "value": {"re": value.re, "im": value.im},
            "kernel": f.name(),
            "basis": MatrixFile::from_matrix(sd.basis()),
        })),
        true,
    ))
}

fn cramer_rao_cmd(
    cli: &Cli,
    base: &dyn Fn(Value) -> Value,
    model_sel: &str,
    f: &str,
    theta: &[f64],
    dim: usize,
) -> CliResult<(Value, bool)> {
    let cost = CostKernel::parse(f)?;
    let (model, estimators) = build_model(model_sel, cli.seed, dim)?;
    let est = EstimatorSet::new(estimators)?;
    if theta.len() != model.param_count() {
        return Err(Box::new(Error::InvalidArgument(format!(
            "model has {} parameters but theta has {} entries",
            model.param_count(),
            theta.len()
        ))));
    }
    let j = fisher_matrix(&model, theta, &cost)?;
    let residual = cramer_rao_residual(&model, &est, theta, &cost)?;
    let min_eig = min_eig(&residual);
    Ok((
        base(json!({
            "cost": cost.name(),
            "theta": theta,
            "fisher_matrix": dmatrix_rows(&j),
            "residual": dmatrix_rows(&residual),
            "residual_min_eigenvalue": min_eig,
        })),
        true,
    ))
}

fn min_eig(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()).scale(0.5);
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}

fn dmatrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Built-in seeded models reproduce the equality cases: affine with
/// estimator B/Tr B², the SLD exponential family with its generator, and
/// the Kubo–Mori exponential family with the normalized generator.
fn build_model(
    selector: &str,
    seed_value: u64,
    dim: usize,
) -> CliResult<(StatisticalModel, Vec<HermitianMatrix>)> {
    if let Some(path) = selector.strip_prefix("file:") {
        return load_model_file(Path::new(path));
    }
    let mut rng = seed::rng_from(seed_value);
    match selector {
        "affine" => {
            let rho0 = random_density_rng(dim, 1e-2, &mut rng);
            let b = random_traceless_hermitian(dim, &mut rng);
            let tr_b2 = (b.mat().adjoint() * b.mat()).trace().re;
            let a = HermitianMatrix::symmetrized(&b.mat().scale(1.0 / tr_b2));
            Ok((StatisticalModel::affine(rho0, vec![b])?, vec![a]))
        }
        "sld-exp" => {
            let rho0 = random_density_rng(dim, 1e-2, &mut rng);
            let raw = random_hermitian(dim, &mut rng);
            let (c, _) = qig_core::fisher::center(&rho0, &raw);
            let norm = (rho0.mat() * c.mat() * c.mat()).trace().re.sqrt();
            let t = HermitianMatrix::symmetrized(&c.mat().scale(1.0 / norm));
            Ok((
                StatisticalModel::sld_exponential(rho0, vec![t.clone()])?,
                vec![t],
            ))
        }
        "km-exp" => {
            let rho0 = random_density_rng(dim, 1e-2, &mut rng);
            let h = qig_core::matcore::matrix_function(rho0.hermitian(), f64::ln)?;
            let raw = random_hermitian(dim, &mut rng);
            let (t, _) = qig_core::fisher::center(&rho0, &raw);
            let n = quadratic_cost(&rho0, &StandardFunction::KuboMori, t.mat(), t.mat())?.re;
            let a = HermitianMatrix::symmetrized(&t.mat().scale(1.0 / n));
            Ok((StatisticalModel::km_exponential(h, vec![t])?, vec![a]))
        }
        other => Err(Box::new(Error::UnknownSelector(other.to_string()))),
    }
}

fn load_model_file(path: &Path) -> CliResult<(StatisticalModel, Vec<HermitianMatrix>)> {
    let text = read(path)?;
    let file: ModelFile = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let load_h = |rel: &str| -> CliResult<HermitianMatrix> {
        Ok(HermitianMatrix::new(read_matrix(&dir.join(rel))?)?)
    };
    let generators: Vec<HermitianMatrix> = file
        .generators
        .iter()
        .map(|g| load_h(g))
        .collect::<CliResult<_>>()?;
    let estimators: Vec<HermitianMatrix> = file
        .estimators
        .iter()
        .map(|e| load_h(e))
        .collect::<CliResult<_>>()?;
    let model = match file.kind.as_str() {
        "affine" => {
            let rho0 = file
                .rho0
                .as_ref()
                .ok_or_else(|| Error::Parse("affine model needs rho0".into()))?;
            StatisticalModel::affine(validate_density(load_h(rho0)?, DEFAULT_FLOOR)?, generators)?
        }
        "sld-exp" => {
            let rho0 = file
                .rho0
                .as_ref()
                .ok_or_else(|| Error::Parse("sld-exp model needs rho0".into()))?;
            StatisticalModel::sld_exponential(
                validate_density(load_h(rho0)?, DEFAULT_FLOOR)?,
                generators,
            )?
        }
        "km-exp" => {
            let h = file
                .h
                .as_ref()
                .ok_or_else(|| Error::Parse("km-exp model needs h".into()))?;
            StatisticalModel::km_exponential(load_h(h)?, generators)?
        }
        other => {
            return Err(Box::new(Error::Parse(format!(
                "unknown model kind `{other}`"
            ))))
        }
    };
    Ok((model, estimators))
}

fn verify_cmd(
    cli: &Cli,
    base: &dyn Fn(Value) -> Value,
    args: &VerifyArgs,
) -> CliResult<(Value, bool)> {
    let run_one = |name: SuiteName| -> CliResult<SuiteReport> {
        let (default_trials, default_tol) = suite_defaults(name);
        let mut cfg = SuiteConfig::new(
            args.trials.unwrap_or(default_trials),
            cli.seed,
            args.tol.unwrap_or(default_tol),
        )?
        .with_jobs(args.jobs)
        .with_max_ops(args.m);
        if let Some(lo) = args.dim {
            cfg = cfg.with_dims(lo, args.dim_max.unwrap_or(lo))?;
        }
        if let Some(sel) = &args.f {
            cfg = cfg.with_functions(vec![parse_standard(sel)?]);
        }
        Ok(match name {
            SuiteName::Oracle => suites::run_oracle_equivalence(&cfg)?,
            SuiteName::ClassicalMonotonicity => suites::run_classical_monotonicity(&cfg)?,
            SuiteName::Monotonicity => {
                let quantity = match args.quantity {
                    QuantityArg::Quasi => MonotoneQuantity::Quasi,
                    QuantityArg::Fisher => MonotoneQuantity::Fisher,
                    QuantityArg::Fishermatrix => MonotoneQuantity::FisherMatrix,
                };
                suites::run_quantum_monotonicity(&cfg, quantity)?
            }
            SuiteName::Pinsker => suites::run_pinsker(&cfg)?,
            SuiteName::Fixtures => suites::run_fixtures(&cfg)?,
            SuiteName::Tilde => suites::run_tilde_program(&cfg)?,
            SuiteName::MetricOrder => suites::run_metric_ordering(&cfg)?,
            SuiteName::CramerRao => suites::run_cramer_rao(&cfg)?,
            SuiteName::Ode => suites::run_exp_ode(&cfg)?,
            SuiteName::FisherMatrix => suites::run_fisher_matrix(&cfg)?,
            SuiteName::Uncertainty => suites::run_uncertainty(&cfg)?,
            SuiteName::Determinism => suites::run_determinism(&cfg)?,
            SuiteName::All => unreachable!("handled by caller"),
        })
    };

    if args.suite == SuiteName::All {
        let names = [
            SuiteName::Oracle,
            SuiteName::ClassicalMonotonicity,
            SuiteName::Monotonicity,
            SuiteName::Pinsker,
            SuiteName::Fixtures,
            SuiteName::Tilde,
            SuiteName::MetricOrder,
            SuiteName::CramerRao,
            SuiteName::Ode,
            SuiteName::FisherMatrix,
            SuiteName::Uncertainty,
            SuiteName::Determinism,
        ];
        let mut reports = Vec::new();
        let mut pass = true;
        for name in names {
            let report = run_one(name)?;
            pass &= report.pass;
            reports.push(report);
        }
        return Ok((base(json!({"pass": pass, "reports": reports})), pass));
    }

    let report = run_one(args.suite)?;
    let pass = report.pass;
    Ok((base(json!({"report": report})), pass))
}

/// (trials, tolerance) defaults matching the acceptance gates.
fn suite_defaults(name: SuiteName) -> (usize, f64) {
    match name {
        SuiteName::Oracle => (200, 1e-10),
        SuiteName::ClassicalMonotonicity => (500, 1e-12),
        SuiteName::Monotonicity => (500, 1e-9),
        SuiteName::Pinsker => (500, 1e-10),
        SuiteName::Fixtures => (1, 1e-12),
        SuiteName::Tilde => (200, 1e-9),
        SuiteName::MetricOrder => (200, 1e-11),
        SuiteName::CramerRao => (200, 1e-8),
        SuiteName::Ode => (3, 1e-12),
        SuiteName::FisherMatrix => (200, 1e-9),
        SuiteName::Uncertainty => (500, 1e-10),
        SuiteName::Determinism => (50, 1e-12),
        SuiteName::All => (0, 0.0),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Box::new(Error::Parse(format!("{}: {e}", path.display()))) as _)
}

fn read_matrix(path: &Path) -> CliResult<qig_core::CMat> {
    Ok(MatrixFile::parse(&read(path)?)?)
}

fn read_density(path: &Path) -> CliResult<qig_core::DensityMatrix> {
    Ok(validate_density(
        HermitianMatrix::new(read_matrix(path)?)?,
        DEFAULT_FLOOR,
    )?)
}

/// Standard-function selectors, including `mixture:<file>`.
fn parse_standard(selector: &str) -> CliResult<StandardFunction> {
    if let Some(path) = selector.strip_prefix("mixture:") {
        return Ok(MixtureFile::parse(&read(Path::new(path))?)?);
    }
    Ok(StandardFunction::parse(selector)?)
}
