//! Csiszár f-divergence on finite probability vectors, partition
//! coarse-graining, and the classical Pinsker gap.
//!
//! The divergence is Σ q(x) f(p(x)/q(x)) with the zero conventions
//! applied per term: `0` when p(x)=q(x)=0, `p(x)·lim f(t)/t` when
//! q(x)=0<p(x), and `q(x)·f(0⁺)` when p(x)=0<q(x). Both limits are
//! analytic metadata of the registry entries, never computed
//! numerically, and +∞ is an ordinary return value.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonnegative weights summing to 1 within `1e-12`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("empty probability vector".into()));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidArgument(
                "probability weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "probability weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Strictly positive random distribution (normalized Exp(1) draws,
/// i.e. flat Dirichlet).
pub fn random_probability(n: usize, rng: &mut impl Rng) -> ProbabilityVector {
    let mut w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= s;
    }
    ProbabilityVector::new(w).expect("normalized draw")
}

/// Disjoint index blocks covering `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    n: usize,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidArgument(format!(
                        "partition index {i} out of range 0..{n}"
                    )));
                }
                if seen[i] {
                    return Err(Error::InvalidArgument(format!(
                        "partition blocks overlap at index {i}"
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidArgument(
                "partition blocks do not cover the index set".into(),
            ));
        }
        Ok(Self { blocks, n })
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            blocks: (0..n).map(|i| vec![i]).collect(),
            n,
        }
    }

    pub fn single_block(n: usize) -> Self {
        Self {
            blocks: vec![(0..n).collect()],
            n,
        }
    }

    /// Random partition into at most `max_blocks` nonempty blocks.
    pub fn random(n: usize, max_blocks: usize, rng: &mut impl Rng) -> Self {
        let k = rng.random_range(1..=max_blocks.max(1));
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
        for i in 0..n {
            blocks[rng.random_range(0..k)].push(i);
        }
        blocks.retain(|b| !b.is_empty());
        Self { blocks, n }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn index_len(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// A convex divergence generator with its analytic limits.
#[derive(Clone, Debug, PartialEq)]
pub enum DivergenceFunction {
    /// t·ln t — relative entropy (Kullback–Leibler).
    KullbackLeibler,
    /// |t−1| — variational (total variation) distance.
    Variational,
    /// (1−√t)²/2 — Hellinger-type generator.
    Hellinger,
    /// (1−t^α)/(α(1−α)), 0<α<1 — relative α-entropy family.
    Alpha(f64),
    /// (1+t−t^s−t^{1−s})/(s(1−s)), 0<s<1 — symmetric power family.
    SymmetricPower(f64),
    /// Österreicher–Vajda family, β>0 (β=1 is the logarithmic member).
    OsterreicherVajda(f64),
    /// base + c·(t−1); divergence-equivalent to `base`.
    Shifted(Box<DivergenceFunction>, f64),
    /// t·base(1/t); swaps the divergence arguments.
    Adjoint(Box<DivergenceFunction>),
}

impl DivergenceFunction {
    /// Parse a CLI selector: `kl`, `variational`, `hellinger`,
    /// `alpha:<a>`, `sympow:<s>`, `ov:<beta>`.
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
            "kl" => Ok(Self::KullbackLeibler),
            "variational" | "tv" => Ok(Self::Variational),
            "hellinger" => Ok(Self::Hellinger),
            "alpha" => {
                let a = num(arg)?;
                if !(0.0 < a && a < 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "alpha must lie in (0,1), got {a}"
                    )));
                }
                Ok(Self::Alpha(a))
            }
            "sympow" => {
                let s = num(arg)?;
                if !(0.0 < s && s < 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "sympow parameter must lie in (0,1), got {s}"
                    )));
                }
                Ok(Self::SymmetricPower(s))
            }
            "ov" => {
                let b = num(arg)?;
                if b <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "ov parameter must be positive, got {b}"
                    )));
                }
                Ok(Self::OsterreicherVajda(b))
            }
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::KullbackLeibler => "kl".into(),
            Self::Variational => "variational".into(),
            Self::Hellinger => "hellinger".into(),
            Self::Alpha(a) => format!("alpha:{a}"),
            Self::SymmetricPower(s) => format!("sympow:{s}"),
            Self::OsterreicherVajda(b) => format!("ov:{b}"),
            Self::Shifted(f, c) => format!("{}+{c}(t-1)", f.name()),
            Self::Adjoint(f) => format!("adjoint({})", f.name()),
        }
    }

    /// Evaluate on t > 0.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::KullbackLeibler => t * t.ln(),
            Self::Variational => (t - 1.0).abs(),
            Self::Hellinger => {
                let d = 1.0 - t.sqrt();
                0.5 * d * d
            }
            Self::Alpha(a) => (1.0 - t.powf(*a)) / (a * (1.0 - a)),
            Self::SymmetricPower(s) => (1.0 + t - t.powf(*s) - t.powf(1.0 - s)) / (s * (1.0 - s)),
            Self::OsterreicherVajda(b) => {
                if (*b - 1.0).abs() < 1e-14 {
                    (1.0 + t) * std::f64::consts::LN_2 + t * t.ln() - (1.0 + t) * (1.0 + t).ln()
                } else {
                    let ib = 1.0 / b;
                    ((1.0 + t.powf(*b)).powf(ib) - (2f64).powf(ib - 1.0) * (1.0 + t)) / (1.0 - ib)
                }
            }
            Self::Shifted(f, c) => f.eval(t) + c * (t - 1.0),
            Self::Adjoint(f) => t * f.eval(1.0 / t),
        }
    }

    /// Analytic limit f(0⁺); may be +∞.
    pub fn at_zero(&self) -> f64 {
        match self {
            Self::KullbackLeibler => 0.0,
            Self::Variational => 1.0,
            Self::Hellinger => 0.5,
            Self::Alpha(a) => 1.0 / (a * (1.0 - a)),
            Self::SymmetricPower(s) => 1.0 / (s * (1.0 - s)),
            Self::OsterreicherVajda(b) => {
                if (*b - 1.0).abs() < 1e-14 {
                    std::f64::consts::LN_2
                } else {
                    let ib = 1.0 / b;
                    (1.0 - (2f64).powf(ib - 1.0)) / (1.0 - ib)
                }
            }
            Self::Shifted(f, c) => f.at_zero() - c,
            Self::Adjoint(f) => f.slope_at_infinity(),
        }
    }

    /// Analytic limit of f(t)/t as t → ∞; may be +∞.
    pub fn slope_at_infinity(&self) -> f64 {
        match self {
            Self::KullbackLeibler => f64::INFINITY,
            Self::Variational => 1.0,
            Self::Hellinger => 0.5,
            Self::Alpha(_) => 0.0,
            Self::SymmetricPower(s) => 1.0 / (s * (1.0 - s)),
            // the family is symmetric, so the slope equals f(0⁺)
            Self::OsterreicherVajda(_) => self.at_zero(),
            Self::Shifted(f, c) => f.slope_at_infinity() + c,
            Self::Adjoint(f) => f.at_zero(),
        }
    }

    /// f + c·(t−1). The f-divergence is invariant under this shift.
    pub fn shifted(&self, c: f64) -> Self {
        Self::Shifted(Box::new(self.clone()), c)
    }

    /// f*(t) = t·f(1/t), satisfying D_f(p‖q) = D_{f*}(q‖p).
    pub fn adjoint(&self) -> Self {
        Self::Adjoint(Box::new(self.clone()))
    }

    /// The divergence functions exercised by the verification suites.
    pub fn registry() -> Vec<Self> {
        vec![
            Self::KullbackLeibler,
            Self::Variational,
            Self::Hellinger,
            Self::Alpha(0.5),
            Self::Alpha(0.3),
            Self::SymmetricPower(0.5),
            Self::OsterreicherVajda(1.0),
            Self::OsterreicherVajda(2.0),
        ]
    }
}

/// Σ q(x) f(p(x)/q(x)) with the zero conventions; +∞ is a value, not an error.
pub fn f_divergence(
    p: &ProbabilityVector,
    q: &ProbabilityVector,
    f: &DivergenceFunction,
) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    let mut total = 0.0;
    for (&pi, &qi) in p.weights().iter().zip(q.weights()) {
        let term = if qi == 0.0 && pi == 0.0 {
            0.0
        } else if qi == 0.0 {
            let slope = f.slope_at_infinity();
            if slope.is_infinite() {
                return Ok(f64::INFINITY);
            }
            pi * slope
        } else if pi == 0.0 {
            let f0 = f.at_zero();
            if f0.is_infinite() {
                return Ok(f64::INFINITY);
            }
            qi * f0
        } else {
            qi * f.eval(pi / qi)
        };
        total += term;
    }
    Ok(total)
}

/// Block sums of `p`, in block order.
pub fn coarse_grain(p: &ProbabilityVector, part: &Partition) -> Result<ProbabilityVector> {
    if part.index_len() != p.len() {
        return Err(Error::DimensionMismatch(part.index_len(), p.len()));
    }
    let w = p.weights();
    let sums: Vec<f64> = part
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&i| w[i]).sum())
        .collect();
    // block sums of a distribution may drift a few ulp from 1; renormalizing
    // here would distort the monotonicity tests, so construct directly
    Ok(ProbabilityVector { weights: sums })
}

/// Total variation Σ|p−q|.
pub fn total_variation(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    Ok(p.weights()
        .iter()
        .zip(q.weights())
        .map(|(a, b)| (a - b).abs())
        .sum())
}

/// 2·D(p‖q) − (Σ|p−q|)². Nonnegative by the Pinsker–Csiszár inequality;
/// +∞ when the divergence diverges.
pub fn pinsker_gap(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    let d = f_divergence(p, q, &DivergenceFunction::KullbackLeibler)?;
    if d.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let v = total_variation(p, q)?;
    Ok(2.0 * d - v * v)
}

/// On-disk probability vector document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbabilityVectorFile {
    pub p: Vec<f64>,
}

impl ProbabilityVectorFile {
    pub fn parse(text: &str) -> Result<ProbabilityVector> {
        let file: ProbabilityVectorFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        ProbabilityVector::new(file.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pv(w: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(w.to_vec()).unwrap()
    }

    #[test]
    fn kl_two_point_example() {
        let d = f_divergence(
            &pv(&[0.5, 0.5]),
            &pv(&[0.25, 0.75]),
            &DivergenceFunction::KullbackLeibler,
        )
        .unwrap();
        // ½·ln(4/3)
        assert_abs_diff_eq!(d, 0.143_841_036_225_890_42, epsilon = 1e-12);
    }

    #[test]
    fn variational_and_alpha_examples() {
        let p = pv(&[1.0, 0.0]);
        let q = pv(&[0.5, 0.5]);
        let v = f_divergence(&p, &q, &DivergenceFunction::Variational).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
        let a = f_divergence(&p, &q, &DivergenceFunction::Alpha(0.5)).unwrap();
        // 4(1−√½)
        assert_abs_diff_eq!(a, 1.171_572_875_253_809_7, epsilon = 1e-12);
    }

    #[test]
    fn identical_arguments_give_zero() {
        let mut rng = seed::rng_from(1);
        let p = random_probability(5, &mut rng);
        for f in DivergenceFunction::registry() {
            let d = f_divergence(&p, &p, &f).unwrap();
            assert!(d.abs() < 1e-12, "{}: {d}", f.name());
        }
    }

    #[test]
    fn kl_divergence_infinite_on_unsupported_q() {
        let d = f_divergence(
            &pv(&[0.5, 0.5]),
            &pv(&[1.0, 0.0]),
            &DivergenceFunction::KullbackLeibler,
        )
        .unwrap();
        assert!(d.is_infinite());
    }

    #[test]
    fn length_mismatch_rejected() {
        let r = f_divergence(
            &pv(&[1.0]),
            &pv(&[0.5, 0.5]),
            &DivergenceFunction::KullbackLeibler,
        );
        assert!(r.is_err());
    }

    #[test]
    fn coarse_grain_examples() {
        let p = pv(&[0.2, 0.3, 0.5]);
        let part = Partition::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        let g = coarse_grain(&p, &part).unwrap();
        assert_abs_diff_eq!(g.weights()[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.weights()[1], 0.5, epsilon = 1e-15);

        let same = coarse_grain(&p, &Partition::singletons(3)).unwrap();
        assert_eq!(same.weights(), p.weights());

        let one = coarse_grain(&p, &Partition::single_block(3)).unwrap();
        assert_eq!(one.len(), 1);
        assert_abs_diff_eq!(one.weights()[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(vec![vec![0, 1], vec![1]], 2).is_err());
        assert!(Partition::new(vec![vec![0]], 2).is_err());
        assert!(Partition::new(vec![vec![0, 2]], 2).is_err());
    }

    #[test]
    fn pinsker_examples() {
        let p = pv(&[1.0, 0.0]);
        let q = pv(&[0.5, 0.5]);
        assert_abs_diff_eq!(
            pinsker_gap(&p, &q).unwrap(),
            0.386_294_361_119_890_6, // 2·ln2 − 1
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(pinsker_gap(&q, &q).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn pinsker_gap_nonnegative_on_random_pairs() {
        for trial in 0..200u64 {
            let mut rng = seed::trial_rng(404, trial);
            let n = 2 + (trial as usize) % 7;
            let p = random_probability(n, &mut rng);
            let q = random_probability(n, &mut rng);
            let g = pinsker_gap(&p, &q).unwrap();
            assert!(g >= -1e-12, "trial {trial}: gap {g}");
        }
    }

    #[test]
    fn partition_monotonicity_over_registry() {
        for trial in 0..100u64 {
            let mut rng = seed::trial_rng(1717, trial);
            let n = 2 + (trial as usize) % 7;
            let p = random_probability(n, &mut rng);
            let q = random_probability(n, &mut rng);
            let part = Partition::random(n, n, &mut rng);
            let pa = coarse_grain(&p, &part).unwrap();
            let qa = coarse_grain(&q, &part).unwrap();
            for f in DivergenceFunction::registry() {
                let fine = f_divergence(&p, &q, &f).unwrap();
                let coarse = f_divergence(&pa, &qa, &f).unwrap();
                assert!(
                    coarse <= fine + 1e-12,
                    "trial {trial} {}: {coarse} > {fine}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn linear_shift_leaves_divergence_unchanged() {
        for trial in 0..50u64 {
            let mut rng = seed::trial_rng(99, trial);
            let p = random_probability(4, &mut rng);
            let q = random_probability(4, &mut rng);
            for f in [
                DivergenceFunction::KullbackLeibler,
                DivergenceFunction::Hellinger,
            ] {
                let base = f_divergence(&p, &q, &f).unwrap();
                for c in [-1.0, 0.5, 3.0] {
                    let shifted = f_divergence(&p, &q, &f.shifted(c)).unwrap();
                    assert!(
                        (shifted - base).abs() <= 1e-12,
                        "c={c}: {shifted} vs {base}"
                    );
                }
            }
        }
    }

    #[test]
    fn blockwise_scaling_attains_equality() {
        // q proportional to p within each block makes coarse-graining lossless
        let mut rng = seed::rng_from(5);
        let p = random_probability(6, &mut rng);
        let part = Partition::new(vec![vec![0, 1], vec![2, 3, 4], vec![5]], 6).unwrap();
        let scales = [0.5, 1.5, 2.0];
        let mut qw: Vec<f64> = p.weights().to_vec();
        for (block, s) in part.blocks().iter().zip(scales) {
            for &i in block {
                qw[i] *= s;
            }
        }
        let z: f64 = qw.iter().sum();
        for x in qw.iter_mut() {
            *x /= z;
        }
        let q = ProbabilityVector::new(qw).unwrap();
        let pa = coarse_grain(&p, &part).unwrap();
        let qa = coarse_grain(&q, &part).unwrap();
        for f in DivergenceFunction::registry() {
            let fine = f_divergence(&p, &q, &f).unwrap();
            let coarse = f_divergence(&pa, &qa, &f).unwrap();
            assert!(
                (fine - coarse).abs() <= 1e-12,
                "{}: {fine} vs {coarse}",
                f.name()
            );
        }
    }

    proptest! {
        #[test]
        fn adjoint_swaps_arguments(raw_p in proptest::collection::vec(1e-3..1.0f64, 2..6),
                                   raw_q in proptest::collection::vec(1e-3..1.0f64, 2..6)) {
            let n = raw_p.len().min(raw_q.len());
            let norm = |v: &[f64]| {
                let s: f64 = v[..n].iter().sum();
                ProbabilityVector::new(v[..n].iter().map(|x| x / s).collect()).unwrap()
            };
            let p = norm(&raw_p);
            let q = norm(&raw_q);
            for f in DivergenceFunction::registry() {
                let lhs = f_divergence(&p, &q, &f).unwrap();
                let rhs = f_divergence(&q, &p, &f.adjoint()).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0),
                             "{}: {} vs {}", f.name(), lhs, rhs);
            }
        }
    }
}
