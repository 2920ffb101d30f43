//! Registry and algebra of the operator monotone functions that generate
//! monotone metrics, plus the convex generators used for divergences.
//!
//! A function f: ℝ⁺ → ℝ⁺ is *standard* when it is operator monotone with
//! f(1) = 1 and x·f(1/x) = f(x). Standard functions sit inside the
//! harmonic/arithmetic envelope 2x/(x+1) ≤ f(x) ≤ (1+x)/2 and carry an
//! analytic limit f(0⁺) that controls skew-information scaling.
//!
//! The registry also holds two divergence-convex generators (x·ln x and
//! the α family). Their orientation flag decides the direction of the
//! coarse-graining inequality in the monotonicity harnesses: convex
//! generators yield divergences that shrink under channels, standard
//! monotone generators feed metrics and covariances.

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seed;

/// Which inequality family a generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Operator monotone, standard: generates metrics and covariances.
    MonotoneStandard,
    /// Matrix convex: generates divergences (decreasing under channels).
    DivergenceConvex,
}

/// A scalar generator with analytic metadata.
#[derive(Clone, Debug, PartialEq)]
pub enum StandardFunction {
    /// (1+t)/2 — the maximal standard function (SLD metric).
    Sld,
    /// 2t/(1+t) — the minimal standard function (largest metric).
    Harmonic,
    /// (t−1)/ln t — Kubo–Mori / Bogoliubov.
    KuboMori,
    /// β(1−β)(t−1)²/((t^β−1)(t^{1−β}−1)), 0<β<1 — Wigner–Yanase–Dyson.
    Wyd(f64),
    /// √t — geometric mean kernel (the Problem-2 experimental flow).
    Geometric,
    /// Reciprocal of the Hansen extremal g_λ, 0 ≤ λ ≤ 1.
    Extremal(f64),
    /// Reciprocal of a convex combination Σ wₖ g_{λₖ}.
    Mixture(Vec<(f64, f64)>),
    /// (1−t^α)/(α(1−α)), 0<α<1 — degree-α relative entropy generator.
    AlphaDivergence(f64),
    /// t·ln t — Umegaki relative entropy generator.
    XLogX,
    /// f̃(t) = ½((t+1) − (t−1)²·f(0)/f(t)) of a standard f.
    Tilde(Box<StandardFunction>),
}

/// Hansen extremal g_λ(x) = ((1+λ)/2)(1/(x+λ) + 1/(1+xλ)).
fn g_extremal(lam: f64, x: f64) -> f64 {
    0.5 * (1.0 + lam) * (1.0 / (x + lam) + 1.0 / (1.0 + x * lam))
}

/// g_λ(0⁺) = (1+λ)²/(2λ); +∞ at λ = 0.
fn g_extremal_at_zero(lam: f64) -> f64 {
    if lam == 0.0 {
        f64::INFINITY
    } else {
        (1.0 + lam) * (1.0 + lam) / (2.0 * lam)
    }
}

impl StandardFunction {
    /// Parse a CLI selector: `sld`, `harmonic`, `km`, `wyd:<beta>`,
    /// `alpha:<a>`, `xlogx`, `extremal:<lam>`, `sqrt`.
    /// (`mixture:<file>` is resolved by the caller that owns file IO.)
    pub fn parse(selector: &str) -> Result<Self> {
        let bad = || Error::UnknownSelector(selector.to_string());
        let (head, arg) = match selector.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (selector, None),
        };
        let num = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())
        };
        match head {
            "sld" => Ok(Self::Sld),
            "harmonic" => Ok(Self::Harmonic),
            "km" => Ok(Self::KuboMori),
            "sqrt" | "geometric" => Ok(Self::Geometric),
            "xlogx" => Ok(Self::XLogX),
            "wyd" => {
                let b = num(arg)?;
                if !(0.0 < b && b < 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "wyd parameter must lie in (0,1), got {b}"
                    )));
                }
                Ok(Self::Wyd(b))
            }
            "alpha" => {
                let a = num(arg)?;
                if !(0.0 < a && a < 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "alpha must lie in (0,1), got {a}"
                    )));
                }
                Ok(Self::AlphaDivergence(a))
            }
            "extremal" => hansen_extremal(num(arg)?),
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Sld => "sld".into(),
            Self::Harmonic => "harmonic".into(),
            Self::KuboMori => "km".into(),
            Self::Wyd(b) => format!("wyd:{b}"),
            Self::Geometric => "sqrt".into(),
            Self::Extremal(l) => format!("extremal:{l}"),
            Self::Mixture(nodes) => {
                let parts: Vec<String> = nodes.iter().map(|(l, w)| format!("{l}@{w}")).collect();
                format!("mixture:{}", parts.join(","))
            }
            Self::AlphaDivergence(a) => format!("alpha:{a}"),
            Self::XLogX => "xlogx".into(),
            Self::Tilde(f) => format!("tilde({})", f.name()),
        }
    }

    pub fn orientation(&self) -> Orientation {
        match self {
            Self::AlphaDivergence(_) | Self::XLogX => Orientation::DivergenceConvex,
            _ => Orientation::MonotoneStandard,
        }
    }

    pub fn is_standard(&self) -> bool {
        self.orientation() == Orientation::MonotoneStandard
    }

    /// Evaluate on t > 0. Removable singularities (Kubo–Mori and WYD at
    /// t = 1) are handled by series / expm1 so no cancellation occurs.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Sld => 0.5 * (1.0 + t),
            Self::Harmonic => 2.0 * t / (1.0 + t),
            Self::KuboMori => {
                let e = t - 1.0;
                if e.abs() < 1e-6 {
                    1.0 + e / 2.0 - e * e / 12.0 + e * e * e / 24.0
                } else {
                    e / t.ln()
                }
            }
            Self::Wyd(b) => {
                if t == 1.0 {
                    return 1.0;
                }
                let l = t.ln();
                let d = t - 1.0;
                b * (1.0 - b) * d * d / (f64::exp_m1(b * l) * f64::exp_m1((1.0 - b) * l))
            }
            Self::Geometric => t.sqrt(),
            Self::Extremal(lam) => 1.0 / g_extremal(*lam, t),
            Self::Mixture(nodes) => {
                let g: f64 = nodes.iter().map(|&(l, w)| w * g_extremal(l, t)).sum();
                1.0 / g
            }
            Self::AlphaDivergence(a) => (1.0 - t.powf(*a)) / (a * (1.0 - a)),
            Self::XLogX => {
                if t == 0.0 {
                    0.0
                } else {
                    t * t.ln()
                }
            }
            Self::Tilde(f) => {
                let f0 = f.at_zero();
                let d = t - 1.0;
                0.5 * ((t + 1.0) - d * d * f0 / f.eval(t))
            }
        }
    }

    /// Analytic limit f(0⁺).
    pub fn at_zero(&self) -> f64 {
        match self {
            Self::Sld => 0.5,
            Self::Harmonic | Self::KuboMori | Self::Geometric | Self::XLogX => 0.0,
            Self::Wyd(b) => b * (1.0 - b),
            Self::Extremal(lam) => 2.0 * lam / ((1.0 + lam) * (1.0 + lam)),
            Self::Mixture(nodes) => {
                let g: f64 = nodes.iter().map(|&(l, w)| w * g_extremal_at_zero(l)).sum();
                if g.is_infinite() {
                    0.0
                } else {
                    1.0 / g
                }
            }
            Self::AlphaDivergence(a) => 1.0 / (a * (1.0 - a)),
            Self::Tilde(f) => {
                if f.at_zero() > 0.0 {
                    0.0
                } else {
                    0.5
                }
            }
        }
    }

    /// Mean kernel c(x, y) = x·f(y/x) with the diagonal limit c(x, x) = x.
    ///
    /// Registry entries get algebraically stable closed forms; the generic
    /// branch falls back to the midpoint when |x−y| ≤ 1e-8·max(x,y).
    /// Only meaningful for standard (monotone) entries.
    pub fn kernel(&self, x: f64, y: f64) -> f64 {
        match self {
            Self::Sld => 0.5 * (x + y),
            Self::Harmonic => 2.0 * x * y / (x + y),
            Self::KuboMori => log_mean(x, y),
            Self::Geometric => (x * y).sqrt(),
            Self::Wyd(b) => {
                if x == y {
                    return x;
                }
                let l = crate::fisher::stable_log_ratio(x, y);
                let d = x - y;
                b * (1.0 - b) * d * d / (y * f64::exp_m1(b * l) * f64::exp_m1((1.0 - b) * l))
            }
            _ => {
                if (x - y).abs() <= 1e-8 * x.max(y) {
                    0.5 * (x + y)
                } else {
                    x * self.eval(y / x)
                }
            }
        }
    }

    /// The f̃ transform; defined for standard functions only.
    pub fn tilde(&self) -> Result<Self> {
        tilde_transform(self)
    }

    /// Default registry exercised by the verification suites.
    pub fn registry() -> Vec<Self> {
        vec![
            Self::Sld,
            Self::Harmonic,
            Self::KuboMori,
            Self::Wyd(0.25),
            Self::Wyd(0.5),
            Self::Wyd(0.75),
            Self::AlphaDivergence(0.3),
            Self::AlphaDivergence(0.5),
            Self::XLogX,
        ]
    }

    /// The standard (monotone) registry entries.
    pub fn standard_registry() -> Vec<Self> {
        Self::registry()
            .into_iter()
            .filter(|f| f.is_standard())
            .collect()
    }
}

/// Logarithmic mean (y−x)/(ln y − ln x), the Kubo–Mori kernel. Uses a
/// series in u = (y−x)/(x+y) near the diagonal.
fn log_mean(x: f64, y: f64) -> f64 {
    if x == y {
        return x;
    }
    let u = (y - x) / (x + y);
    if u.abs() < 1e-4 {
        0.5 * (x + y) * (1.0 - u * u / 3.0 - 4.0 * u.powi(4) / 45.0)
    } else {
        (y - x) / crate::fisher::stable_log_ratio(y, x)
    }
}

/// f̃(t) = ½((t+1) − (t−1)²·f(0)/f(t)); standard whenever f is.
pub fn tilde_transform(f: &StandardFunction) -> Result<StandardFunction> {
    if !f.is_standard() {
        return Err(Error::InvalidArgument(format!(
            "tilde transform requires a standard function, got {}",
            f.name()
        )));
    }
    Ok(StandardFunction::Tilde(Box::new(f.clone())))
}

/// The extremal standard function with 1/f = g_λ.
pub fn hansen_extremal(lam: f64) -> Result<StandardFunction> {
    if !(0.0..=1.0).contains(&lam) {
        return Err(Error::InvalidArgument(format!(
            "extremal parameter must lie in [0,1], got {lam}"
        )));
    }
    Ok(StandardFunction::Extremal(lam))
}

/// The standard function with 1/f = Σ wₖ g_{λₖ} for a probability
/// weight vector over nodes in `[0,1]`.
pub fn hansen_mixture(nodes: &[f64], weights: &[f64]) -> Result<StandardFunction> {
    if nodes.len() != weights.len() || nodes.is_empty() {
        return Err(Error::InvalidArgument(
            "mixture nodes and weights must be nonempty and of equal length".into(),
        ));
    }
    if nodes.iter().any(|l| !(0.0..=1.0).contains(l)) {
        return Err(Error::InvalidArgument(
            "mixture nodes must lie in [0,1]".into(),
        ));
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(Error::InvalidArgument(
            "mixture weights must be nonnegative".into(),
        ));
    }
    let s: f64 = weights.iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "mixture weights sum to {s}, expected 1"
        )));
    }
    Ok(StandardFunction::Mixture(
        nodes.iter().copied().zip(weights.iter().copied()).collect(),
    ))
}

/// Nodes/weights document backing the `mixture:<file>` selector.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct MixtureFile {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl MixtureFile {
    pub fn parse(text: &str) -> Result<StandardFunction> {
        let file: MixtureFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        hansen_mixture(&file.nodes, &file.weights)
    }
}

// ---------------------------------------------------------------------------
// Numerical standard-ness certification
// ---------------------------------------------------------------------------

/// One gate of a certification run.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    /// Worst observed violation (0 when clean); sign convention per gate.
    pub worst: f64,
    pub threshold: f64,
}

/// Outcome of [`check_standard`]. The Loewner gate is a necessary
/// condition for operator monotonicity, not a proof.
#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub function: String,
    pub checks: Vec<CheckResult>,
}

impl CertificationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name)
            .collect()
    }
}

/// Internal seed of the Loewner point draws; fixed so reports are
/// reproducible run to run.
const CERT_SEED: u64 = 0x51eb_851f;

/// Certify standard-ness gates numerically for a registry function.
pub fn check_standard(
    f: &StandardFunction,
    grid_size: usize,
    loewner_order: usize,
) -> Result<CertificationReport> {
    check_standard_fn(&f.name(), |t| f.eval(t), grid_size, loewner_order)
}

/// Raw-closure variant of [`check_standard`], for functions outside the
/// registry (counterexamples, ad-hoc generators).
pub fn check_standard_fn(
    name: &str,
    f: impl Fn(f64) -> f64,
    grid_size: usize,
    loewner_order: usize,
) -> Result<CertificationReport> {
    if grid_size < 10 {
        return Err(Error::InvalidArgument(format!(
            "grid_size must be at least 10, got {grid_size}"
        )));
    }
    if !(2..=8).contains(&loewner_order) {
        return Err(Error::InvalidArgument(format!(
            "loewner_order must lie in 2..=8, got {loewner_order}"
        )));
    }

    let grid = log_grid(1e-4, 1e4, grid_size);
    let mut checks = Vec::new();

    let unit = (f(1.0) - 1.0).abs();
    checks.push(CheckResult {
        name: "f(1) = 1",
        pass: unit <= 1e-12,
        worst: unit,
        threshold: 1e-12,
    });

    // symmetry and bounds are relative to the magnitude of f on the grid
    let mut sym = 0.0f64;
    let mut bound = 0.0f64;
    let mut mono = 0.0f64;
    let mut prev = f64::NEG_INFINITY;
    for &x in &grid {
        let fx = f(x);
        let scale = fx.abs().max(1.0);
        sym = sym.max((x * f(1.0 / x) - fx).abs() / scale);
        let lower = 2.0 * x / (x + 1.0);
        let upper = 0.5 * (1.0 + x);
        bound = bound.max((lower - fx) / scale).max((fx - upper) / scale);
        mono = mono.max((prev - fx) / scale);
        prev = fx;
    }
    checks.push(CheckResult {
        name: "symmetry x f(1/x) = f(x)",
        pass: sym <= 1e-10,
        worst: sym,
        threshold: 1e-10,
    });
    checks.push(CheckResult {
        name: "harmonic/arithmetic envelope",
        pass: bound <= 1e-10,
        worst: bound,
        threshold: 1e-10,
    });
    checks.push(CheckResult {
        name: "nondecreasing on grid",
        pass: mono <= 1e-10,
        worst: mono,
        threshold: 1e-10,
    });

    // Loewner matrices: [(f(xi)-f(xj))/(xi-xj)], diagonal f' by central
    // difference. PSD is necessary for operator monotonicity.
    let mut worst_eig = f64::INFINITY;
    for draw in 0..50u64 {
        let mut rng = seed::trial_rng(CERT_SEED, draw);
        let pts = separated_points(loewner_order, &mut rng);
        let mut l = DMatrix::<f64>::zeros(loewner_order, loewner_order);
        for i in 0..loewner_order {
            for j in 0..loewner_order {
                l[(i, j)] = if i == j {
                    let h = 1e-6 * pts[i];
                    (f(pts[i] + h) - f(pts[i] - h)) / (2.0 * h)
                } else {
                    (f(pts[i]) - f(pts[j])) / (pts[i] - pts[j])
                };
            }
        }
        let min_eig = l
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        worst_eig = worst_eig.min(min_eig);
    }
    checks.push(CheckResult {
        name: "loewner matrix PSD (necessary condition)",
        pass: worst_eig >= -1e-8,
        worst: worst_eig,
        threshold: -1e-8,
    });

    Ok(CertificationReport {
        function: name.to_string(),
        checks,
    })
}

/// Logarithmically spaced grid on [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Sorted log-uniform points in `[1e-2, 1e2]` with a minimal relative
/// separation, so divided differences stay well conditioned.
fn separated_points(m: usize, rng: &mut impl Rng) -> Vec<f64> {
    let (lo, hi) = (1e-2f64.ln(), 1e2f64.ln());
    let mut pts: Vec<f64> = (0..m)
        .map(|_| (lo + (hi - lo) * rng.random::<f64>()).exp())
        .collect();
    pts.sort_by(f64::total_cmp);
    for i in 1..m {
        if pts[i] < pts[i - 1] * (1.0 + 1e-4) {
            pts[i] = pts[i - 1] * (1.0 + 1e-4);
        }
    }
    pts
}
