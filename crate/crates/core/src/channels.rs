//! CPTP coarse-grainings in Kraus form: random channels, pinchings,
//! partial traces and measurement maps, their Hilbert–Schmidt adjoints,
//! and the signed monotonicity gap used by the verification suites.
//!
//! Complete positivity is structural (everything is built from Kraus
//! families); trace preservation Σ K*ₖKₖ = I is asserted on construction,
//! which simultaneously certifies that the adjoint is unital.

use nalgebra::DMatrix;
use rand::Rng;

use crate::classical::Partition;
use crate::error::{Error, Result};
use crate::estimation::{fisher_matrix_parts, CostKernel, StatisticalModel};
use crate::fisher::fisher_metric;
use crate::matcore::{
    matrix_function, mix_with_identity, random_complex_gaussian, random_isometry,
    spectral_decompose, validate_density, CMat, DensityMatrix, HermitianMatrix, C64,
};
use crate::quasient::quasi_entropy;
use crate::seed;
use crate::stdfunc::{Orientation, StandardFunction};

/// Tolerance on Σ K*K = I.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-10;
/// Relaxed positivity floor applied when re-validating channel outputs.
pub const OUTPUT_FLOOR: f64 = 1e-12;
/// Mixing weight used to re-floor a numerically singular output state.
pub const REFLOOR_WEIGHT: f64 = 1e-10;

/// A completely positive trace-preserving map given by Kraus operators.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    kraus: Vec<CMat>,
    din: usize,
    dout: usize,
}

/// Channel output: the state, plus a flag recording whether it had to be
/// re-floored by mixing with I/n to stay invertible.
#[derive(Clone, Debug)]
pub struct ChannelOutput {
    pub density: DensityMatrix,
    pub refloored: bool,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Kraus family".into()))?;
        let (dout, din) = first.shape();
        for k in &kraus {
            if k.shape() != (dout, din) {
                return Err(Error::InvalidArgument(
                    "Kraus operators must share one shape".into(),
                ));
            }
        }
        let mut sum = CMat::zeros(din, din);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let dev = (sum - CMat::identity(din, din)).norm();
        if dev > TRACE_PRESERVATION_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(Self { kraus, din, dout })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![CMat::identity(dim, dim)],
            din: dim,
            dout: dim,
        }
    }

    /// Fully depolarizing channel: every state maps to I/n.
    pub fn completely_depolarizing(dim: usize) -> Self {
        let scale = 1.0 / (dim as f64).sqrt();
        let mut kraus = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut k = CMat::zeros(dim, dim);
                k[(i, j)] = C64::new(scale, 0.0);
                kraus.push(k);
            }
        }
        Self {
            kraus,
            din: dim,
            dout: dim,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.din
    }

    pub fn output_dim(&self) -> usize {
        self.dout
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    /// Linear action Σ K M K* on an arbitrary matrix (tangents included).
    pub fn apply_matrix(&self, m: &CMat) -> Result<CMat> {
        if m.nrows() != self.din || m.ncols() != self.din {
            return Err(Error::DimensionMismatch(self.din, m.nrows()));
        }
        let mut out = CMat::zeros(self.dout, self.dout);
        for k in &self.kraus {
            out += k * m * k.adjoint();
        }
        Ok(out)
    }

    /// Apply to a state and re-validate. A numerically singular output is
    /// lifted by mixing with I/n at weight [`REFLOOR_WEIGHT`], flagged in
    /// the result.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<ChannelOutput> {
        let raw = HermitianMatrix::symmetrized(&self.apply_matrix(rho.mat())?);
        let min = spectral_decompose(&raw).min_eigenvalue();
        let (h, refloored) = if min < OUTPUT_FLOOR {
            (
                mix_with_identity(&raw, min, REFLOOR_WEIGHT / self.dout as f64),
                true,
            )
        } else {
            (raw, false)
        };
        Ok(ChannelOutput {
            density: validate_density(h, 0.0)?,
            refloored,
        })
    }

    /// Hilbert–Schmidt adjoint Σ K* A K; unital exactly when the channel
    /// is trace preserving.
    pub fn adjoint_apply(&self, a: &CMat) -> Result<CMat> {
        if a.nrows() != self.dout || a.ncols() != self.dout {
            return Err(Error::DimensionMismatch(self.dout, a.nrows()));
        }
        let mut out = CMat::zeros(self.din, self.din);
        for k in &self.kraus {
            out += k.adjoint() * a * k;
        }
        Ok(out)
    }
}

/// Haar-random channel: an isometry din → dout·kraus_count cut into blocks.
pub fn random_channel(
    din: usize,
    dout: usize,
    kraus_count: usize,
    seed_value: u64,
) -> Result<QuantumChannel> {
    if kraus_count == 0 {
        return Err(Error::InvalidArgument(
            "kraus_count must be positive".into(),
        ));
    }
    let mut rng = seed::rng_from(seed_value);
    random_channel_rng(din, dout, kraus_count, &mut rng)
}

/// Rng-driven variant of [`random_channel`].
pub fn random_channel_rng(
    din: usize,
    dout: usize,
    kraus_count: usize,
    rng: &mut impl Rng,
) -> Result<QuantumChannel> {
    if dout * kraus_count < din {
        return Err(Error::InvalidArgument(format!(
            "no isometry {din} -> {dout}x{kraus_count}"
        )));
    }
    let v = random_isometry(dout * kraus_count, din, rng);
    let kraus: Vec<CMat> = (0..kraus_count)
        .map(|b| v.rows(b * dout, dout).into_owned())
        .collect();
    QuantumChannel::new(kraus)
}

/// Pinching onto the block-diagonal subalgebra spanned by `blocks` of the
/// columns of `basis`: Kraus operators are the block projections.
pub fn pinching(basis: &CMat, blocks: &Partition) -> Result<QuantumChannel> {
    let n = basis.nrows();
    if basis.ncols() != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: basis.ncols(),
        });
    }
    if blocks.index_len() != n {
        return Err(Error::DimensionMismatch(blocks.index_len(), n));
    }
    let unitarity = (basis.adjoint() * basis - CMat::identity(n, n)).norm();
    if unitarity > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "pinching basis is not unitary (deviation {unitarity:.3e})"
        )));
    }
    let kraus: Vec<CMat> = blocks
        .blocks()
        .iter()
        .map(|block| {
            let mut proj = CMat::zeros(n, n);
            for &i in block {
                let col = basis.column(i);
                for r in 0..n {
                    for c in 0..n {
                        proj[(r, c)] += col[r] * col[c].conj();
                    }
                }
            }
            proj
        })
        .collect();
    QuantumChannel::new(kraus)
}

/// Which tensor factor survives the partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace over a d1⊗d2 system as a Kraus family of bra contractions.
pub fn partial_trace(d1: usize, d2: usize, keep: Subsystem) -> QuantumChannel {
    let n = d1 * d2;
    let kraus: Vec<CMat> = match keep {
        Subsystem::First => (0..d2)
            .map(|r| {
                let mut k = CMat::zeros(d1, n);
                for i in 0..d1 {
                    k[(i, i * d2 + r)] = C64::new(1.0, 0.0);
                }
                k
            })
            .collect(),
        Subsystem::Second => (0..d1)
            .map(|r| {
                let mut k = CMat::zeros(d2, n);
                for s in 0..d2 {
                    k[(s, r * d2 + s)] = C64::new(1.0, 0.0);
                }
                k
            })
            .collect(),
    };
    QuantumChannel::new(kraus).expect("partial trace is trace preserving")
}

/// Measurement map ρ ↦ Diag(Tr ρF₁, …, Tr ρFₗ) for a POVM {Fⱼ}.
pub fn measurement_channel(povm: &[HermitianMatrix]) -> Result<QuantumChannel> {
    let outcomes = povm.len();
    if outcomes == 0 {
        return Err(Error::InvalidArgument("empty POVM".into()));
    }
    let dim = povm[0].dim();
    let mut sum = CMat::zeros(dim, dim);
    for f in povm {
        if f.dim() != dim {
            return Err(Error::DimensionMismatch(dim, f.dim()));
        }
        sum += f.mat();
    }
    if (sum - CMat::identity(dim, dim)).norm() > 1e-10 {
        return Err(Error::InvalidArgument(
            "POVM does not sum to identity".into(),
        ));
    }
    let mut kraus = Vec::new();
    for (j, f) in povm.iter().enumerate() {
        let sd = spectral_decompose(f);
        for (r, &mu) in sd.eigenvalues().iter().enumerate() {
            if mu < -1e-10 {
                return Err(Error::Positivity {
                    found: mu,
                    floor: 0.0,
                });
            }
            if mu <= 0.0 {
                continue;
            }
            // K = √μ |j⟩⟨v_r|
            let mut k = CMat::zeros(outcomes, dim);
            let v = sd.basis().column(r);
            for c in 0..dim {
                k[(j, c)] = v[c].conj() * C64::new(mu.sqrt(), 0.0);
            }
            kraus.push(k);
        }
    }
    QuantumChannel::new(kraus)
}

/// Random full-rank POVM: Wishart blocks symmetrized by the inverse root
/// of their sum.
pub fn random_povm(dim: usize, outcomes: usize, rng: &mut impl Rng) -> Vec<HermitianMatrix> {
    let gs: Vec<CMat> = (0..outcomes)
        .map(|_| {
            let m = random_complex_gaussian(dim, dim, rng);
            &m * m.adjoint()
        })
        .collect();
    let mut total = CMat::zeros(dim, dim);
    for g in &gs {
        total += g;
    }
    let inv_root = matrix_function(&HermitianMatrix::symmetrized(&total), |x| 1.0 / x.sqrt())
        .expect("positive definite sum");
    gs.iter()
        .map(|g| HermitianMatrix::symmetrized(&(inv_root.mat() * g * inv_root.mat())))
        .collect()
}

/// Which monotone quantity a gap refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonotoneQuantity {
    Quasi,
    Fisher,
    FisherMatrix,
}

/// Inputs for [`monotonicity_gap`].
pub enum MonotonicityInputs<'a> {
    /// State pair and observable; the observable lives in the channel
    /// output space and is ignored for divergence-convex generators.
    Quasi {
        rho1: &'a DensityMatrix,
        rho2: &'a DensityMatrix,
        a: &'a CMat,
    },
    /// Foot point and tangent of a metric evaluation.
    Fisher {
        rho: &'a DensityMatrix,
        a: &'a HermitianMatrix,
    },
    /// Parametrized model whose Fisher matrix is transported.
    FisherMatrix {
        model: &'a StatisticalModel,
        theta: &'a [f64],
    },
}

/// Sign-adjusted coarse-graining gap; nonnegative (within tolerance) by
/// the monotonicity theorems.
///
/// - divergence-convex f: S_f(ρ₁‖ρ₂) − S_f(β(ρ₁)‖β(ρ₂)) with A = I;
/// - standard monotone f: S_f^A(β(ρ₁)‖β(ρ₂)) − S_f^{β*(A)}(ρ₁‖ρ₂);
/// - metrics: γ_ρ^f(A,A) − γ_{β(ρ)}^f(β(A),β(A));
/// - Fisher matrices: the minimal eigenvalue of I^{1Q} − I^{2Q}.
pub fn monotonicity_gap(
    quantity: MonotoneQuantity,
    inputs: MonotonicityInputs<'_>,
    f: &StandardFunction,
    ch: &QuantumChannel,
) -> Result<f64> {
    match (quantity, inputs) {
        (MonotoneQuantity::Quasi, MonotonicityInputs::Quasi { rho1, rho2, a }) => {
            let out1 = ch.apply(rho1)?.density;
            let out2 = ch.apply(rho2)?.density;
            match f.orientation() {
                Orientation::DivergenceConvex => {
                    let id = CMat::identity(rho1.dim(), rho1.dim());
                    let id_out = CMat::identity(out1.dim(), out1.dim());
                    let fine = quasi_entropy(rho1, rho2, &id, f)?;
                    let coarse = quasi_entropy(&out1, &out2, &id_out, f)?;
                    Ok(fine - coarse)
                }
                Orientation::MonotoneStandard => {
                    let back = ch.adjoint_apply(a)?;
                    let lhs = quasi_entropy(&out1, &out2, a, f)?;
                    let rhs = quasi_entropy(rho1, rho2, &back, f)?;
                    Ok(lhs - rhs)
                }
            }
        }
        (MonotoneQuantity::Fisher, MonotonicityInputs::Fisher { rho, a }) => {
            if f.orientation() != Orientation::MonotoneStandard {
                return Err(Error::InvalidArgument(
                    "metric monotonicity needs a standard function".into(),
                ));
            }
            let out = ch.apply(rho)?.density;
            let ta = ch.apply_matrix(a.mat())?;
            let fine = fisher_metric(rho, f, a.mat(), a.mat())?.re;
            let coarse = fisher_metric(&out, f, &ta, &ta)?.re;
            Ok(fine - coarse)
        }
        (MonotoneQuantity::FisherMatrix, MonotonicityInputs::FisherMatrix { model, theta }) => {
            if f.orientation() != Orientation::MonotoneStandard {
                return Err(Error::InvalidArgument(
                    "Fisher-matrix monotonicity needs a standard function".into(),
                ));
            }
            let cost = CostKernel::Monotone(f.clone());
            let rho = model.state_at(theta)?;
            let tangents = model.tangents_at(theta)?;
            let fine = fisher_matrix_parts(&rho, &tangents, &cost)?;
            let out = ch.apply(&rho)?.density;
            let moved: Result<Vec<HermitianMatrix>> = tangents
                .iter()
                .map(|t| Ok(HermitianMatrix::symmetrized(&ch.apply_matrix(t.mat())?)))
                .collect();
            let coarse = fisher_matrix_parts(&out, &moved?, &cost)?;
            let diff = fine - coarse;
            Ok(min_symmetric_eigenvalue(&diff))
        }
        _ => Err(Error::InvalidArgument(
            "monotonicity inputs do not match the requested quantity".into(),
        )),
    }
}

pub(crate) fn min_symmetric_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()).scale(0.5);
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{f_divergence, DivergenceFunction, ProbabilityVector};
    use crate::matcore::{random_density, random_density_rng, random_hermitian, random_unitary};
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_channel_is_transparent() {
        let rho = random_density(3, 1).unwrap();
        let ch = QuantumChannel::identity(3);
        let out = ch.apply(&rho).unwrap();
        assert!((out.density.mat() - rho.mat()).norm() < 1e-14);
        assert!(!out.refloored);
        let id = CMat::identity(3, 3);
        assert!((ch.adjoint_apply(&id).unwrap() - id).norm() < 1e-14);
    }

    #[test]
    fn depolarizing_reaches_maximally_mixed() {
        let rho = random_density(4, 2).unwrap();
        let ch = QuantumChannel::completely_depolarizing(4);
        let out = ch.apply(&rho).unwrap().density;
        assert!((out.mat() - CMat::identity(4, 4).scale(0.25)).norm() < 1e-12);
    }

    #[test]
    fn random_channels_are_trace_preserving_and_deterministic() {
        for s in 0..100u64 {
            let ch = random_channel(3, 3, 2, s).unwrap();
            let mut sum = CMat::zeros(3, 3);
            for k in ch.kraus() {
                sum += k.adjoint() * k;
            }
            assert!((sum - CMat::identity(3, 3)).norm() < 1e-10);
            let rho = random_density(3, s + 1000).unwrap();
            let out = ch.apply(&rho).unwrap().density;
            assert_abs_diff_eq!(out.mat().trace().re, 1.0, epsilon = 1e-10);
        }
        let a = random_channel(2, 2, 3, 7).unwrap();
        let b = random_channel(2, 2, 3, 7).unwrap();
        for (ka, kb) in a.kraus().iter().zip(b.kraus()) {
            assert_eq!(ka, kb);
        }
    }

    #[test]
    fn single_kraus_square_channel_is_unitary() {
        let ch = random_channel(3, 3, 1, 5).unwrap();
        let k = &ch.kraus()[0];
        assert!((k.adjoint() * k - CMat::identity(3, 3)).norm() < 1e-12);
        assert!((k * k.adjoint() - CMat::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn adjoint_duality_on_seeded_triples() {
        for trial in 0..100u64 {
            let mut rng = seed::trial_rng(12, trial);
            let ch = random_channel_rng(3, 2, 2, &mut rng).unwrap();
            let rho = random_density_rng(3, 1e-6, &mut rng);
            let a = random_hermitian(2, &mut rng);
            let lhs = (ch.apply_matrix(rho.mat()).unwrap() * a.mat()).trace().re;
            let rhs = (rho.mat() * ch.adjoint_apply(a.mat()).unwrap()).trace().re;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-11 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn pinching_projects_and_is_idempotent() {
        let mut rng = seed::rng_from(3);
        let rho = random_density_rng(3, 1e-6, &mut rng);
        let full = pinching(&CMat::identity(3, 3), &Partition::singletons(3)).unwrap();
        let out = full.apply(&rho).unwrap().density;
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert_abs_diff_eq!(
                        out.mat()[(i, j)].re,
                        rho.mat()[(i, i)].re,
                        epsilon = 1e-12
                    );
                } else {
                    assert!(out.mat()[(i, j)].norm() < 1e-12);
                }
            }
        }
        let u = random_unitary(3, &mut rng);
        let part = Partition::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        let ch = pinching(&u, &part).unwrap();
        let once = ch.apply(&rho).unwrap().density;
        let twice = ch.apply(&once).unwrap().density;
        assert!((once.mat() - twice.mat()).norm() < 1e-12);

        // pinching is self-adjoint
        let a = random_hermitian(3, &mut rng);
        let via_apply = ch.apply_matrix(a.mat()).unwrap();
        let via_adjoint = ch.adjoint_apply(a.mat()).unwrap();
        assert!((via_apply - via_adjoint).norm() < 1e-12);
    }

    #[test]
    fn pinched_pair_matches_classical_divergence_of_diagonals() {
        let mut rng = seed::rng_from(8);
        let rho1 = random_density_rng(3, 1e-6, &mut rng);
        let rho2 = random_density_rng(3, 1e-6, &mut rng);
        let ch = pinching(&CMat::identity(3, 3), &Partition::singletons(3)).unwrap();
        let p1 = ch.apply(&rho1).unwrap().density;
        let p2 = ch.apply(&rho2).unwrap().density;
        let id = CMat::identity(3, 3);
        let sq = quasi_entropy(&p1, &p2, &id, &StandardFunction::XLogX).unwrap();
        let pv = |rho: &DensityMatrix| {
            ProbabilityVector::new((0..3).map(|i| rho.mat()[(i, i)].re).collect()).unwrap()
        };
        let dc =
            f_divergence(&pv(&rho1), &pv(&rho2), &DivergenceFunction::KullbackLeibler).unwrap();
        assert_abs_diff_eq!(sq, dc, epsilon = 1e-11 * dc.abs().max(1.0));
    }

    #[test]
    fn partial_trace_cases() {
        let mut rng = seed::rng_from(5);
        let rho_a = random_density_rng(2, 1e-6, &mut rng);
        let rho_b = random_density_rng(3, 1e-6, &mut rng);
        let product = HermitianMatrix::symmetrized(&rho_a.mat().kronecker(rho_b.mat()));
        let joint = validate_density(product, 0.0).unwrap();

        let keep_first = partial_trace(2, 3, Subsystem::First);
        let out = keep_first.apply(&joint).unwrap().density;
        assert!((out.mat() - rho_a.mat()).norm() < 1e-11);

        let keep_second = partial_trace(2, 3, Subsystem::Second);
        let out2 = keep_second.apply(&joint).unwrap().density;
        assert!((out2.mat() - rho_b.mat()).norm() < 1e-11);

        // Bell-type state reduces to I/2 (floored to stay invertible)
        let mut bell = CMat::zeros(4, 4);
        for (i, j) in [(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            bell[(i, j)] = C64::new(0.5, 0.0);
        }
        let eps = 1e-8;
        let reg = HermitianMatrix::symmetrized(
            &(bell.scale(1.0 - eps) + CMat::identity(4, 4).scale(eps / 4.0)),
        );
        let bell_state = validate_density(reg, 0.0).unwrap();
        let red = partial_trace(2, 2, Subsystem::First)
            .apply(&bell_state)
            .unwrap()
            .density;
        assert!((red.mat() - CMat::identity(2, 2).scale(0.5)).norm() < 1e-7);

        // trace preserved on random bipartite states
        for trial in 0..20u64 {
            let mut rng = seed::trial_rng(9, trial);
            let joint = random_density_rng(6, 1e-8, &mut rng);
            let red = partial_trace(2, 3, Subsystem::First).apply(&joint).unwrap();
            assert_abs_diff_eq!(red.density.mat().trace().re, 1.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn measurement_channel_diagonalizes_probabilities() {
        let mut rng = seed::rng_from(21);
        let povm = random_povm(3, 4, &mut rng);
        let ch = measurement_channel(&povm).unwrap();
        let rho = random_density_rng(3, 1e-6, &mut rng);
        let out = ch.apply(&rho).unwrap().density;
        for (j, fj) in povm.iter().enumerate() {
            let pj = (rho.mat() * fj.mat()).trace().re;
            assert_abs_diff_eq!(out.mat()[(j, j)].re, pj, epsilon = 1e-11);
            for k in 0..4 {
                if k != j {
                    assert!(out.mat()[(j, k)].norm() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn monotonicity_gap_identity_channel_is_zero() {
        let mut rng = seed::rng_from(31);
        let rho1 = random_density_rng(2, 1e-4, &mut rng);
        let rho2 = random_density_rng(2, 1e-4, &mut rng);
        let a = random_hermitian(2, &mut rng);
        let ch = QuantumChannel::identity(2);
        for f in [StandardFunction::XLogX, StandardFunction::Sld] {
            let gap = monotonicity_gap(
                MonotoneQuantity::Quasi,
                MonotonicityInputs::Quasi {
                    rho1: &rho1,
                    rho2: &rho2,
                    a: a.mat(),
                },
                &f,
                &ch,
            )
            .unwrap();
            assert_abs_diff_eq!(gap, 0.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn monotonicity_gap_pinching_on_commuting_pair_is_zero() {
        // both states diagonal in the pinching basis
        let mut rng = seed::rng_from(37);
        let u = random_unitary(3, &mut rng);
        let mk = |d: &[f64]| {
            let diag = HermitianMatrix::from_real_diagonal(d);
            validate_density(
                HermitianMatrix::symmetrized(&(&u * diag.mat() * u.adjoint())),
                0.0,
            )
            .unwrap()
        };
        let rho1 = mk(&[0.5, 0.3, 0.2]);
        let rho2 = mk(&[0.25, 0.35, 0.4]);
        let part = Partition::new(vec![vec![0, 2], vec![1]], 3).unwrap();
        let ch = pinching(&u, &part).unwrap();
        let gap = monotonicity_gap(
            MonotoneQuantity::Quasi,
            MonotonicityInputs::Quasi {
                rho1: &rho1,
                rho2: &rho2,
                a: &CMat::identity(3, 3),
            },
            &StandardFunction::XLogX,
            &ch,
        )
        .unwrap();
        assert_abs_diff_eq!(gap, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn monotonicity_gaps_nonnegative_small_run() {
        for trial in 0..40u64 {
            let mut rng = seed::trial_rng(41, trial);
            let dim = 2 + (trial as usize) % 3;
            let ch = random_channel_rng(dim, dim, 2, &mut rng).unwrap();
            let rho1 = random_density_rng(dim, 1e-4, &mut rng);
            let rho2 = random_density_rng(dim, 1e-4, &mut rng);
            let a = random_hermitian(dim, &mut rng);
            for f in [
                StandardFunction::XLogX,
                StandardFunction::AlphaDivergence(0.5),
                StandardFunction::Sld,
                StandardFunction::KuboMori,
            ] {
                let gap = monotonicity_gap(
                    MonotoneQuantity::Quasi,
                    MonotonicityInputs::Quasi {
                        rho1: &rho1,
                        rho2: &rho2,
                        a: a.mat(),
                    },
                    &f,
                    &ch,
                )
                .unwrap();
                assert!(gap >= -1e-9, "trial {trial} {}: {gap}", f.name());
            }
            let tangent = crate::matcore::random_traceless_hermitian(dim, &mut rng);
            let gap = monotonicity_gap(
                MonotoneQuantity::Fisher,
                MonotonicityInputs::Fisher {
                    rho: &rho1,
                    a: &tangent,
                },
                &StandardFunction::Sld,
                &ch,
            )
            .unwrap();
            assert!(gap >= -1e-9, "fisher trial {trial}: {gap}");
        }
    }
}
