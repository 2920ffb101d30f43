//! Monotone quantum Fisher metrics and the superoperator J_ρ.
//!
//! For a standard function f and an invertible state ρ with eigenbasis
//! ρ = U diag(λ) U*, the operator J_ρ acts entrywise in the eigenbasis
//! through the mean kernel c(x, y) = x·f(y/x):
//!
//!   (J_ρ A)ᵢⱼ = c(λᵢ, λⱼ) Aᵢⱼ,       γ_ρ^f(A, B) = Tr A* J_ρ⁻¹(B),
//!
//! and the quadratic cost is the dual form Tr A* J_ρ(B). The arithmetic
//! kernel (f = (1+t)/2) reproduces the SLD calculus, the logarithmic
//! mean gives Kubo–Mori.

use crate::error::{Error, Result};
use crate::matcore::{
    spectral_decompose, CMat, DensityMatrix, HermitianMatrix, SpectralDecomposition, C64,
};
use crate::quasient::{generalized_covariance, quasi_entropy};
use crate::stdfunc::StandardFunction;

/// Relative eigenvalue gap under which two eigenvalues are folded into
/// one degenerate block.
const DEGENERACY_TOL: f64 = 1e-8;

/// ln(x/y) with full relative accuracy for x ≈ y (atanh form keeps the
/// cancellation in the numerator, where it is exact) and for extreme
/// ratios (plain logarithm of the ratio).
pub(crate) fn stable_log_ratio(x: f64, y: f64) -> f64 {
    let u = (x - y) / (x + y);
    if u.abs() < 0.5 {
        2.0 * u.atanh()
    } else {
        (x / y).ln()
    }
}

/// The two-variable mean kernel of a standard function.
#[derive(Clone, Debug)]
pub struct MeanKernel {
    f: StandardFunction,
}

impl MeanKernel {
    pub fn new(f: StandardFunction) -> Result<Self> {
        if !f.is_standard() {
            return Err(Error::InvalidArgument(format!(
                "mean kernel requires a standard function, got {}",
                f.name()
            )));
        }
        Ok(Self { f })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.f.kernel(x, y)
    }

    pub fn function(&self) -> &StandardFunction {
        &self.f
    }
}

/// Traceless Hermitian matrix: a tangent of the state manifold in the
/// affine parametrization.
#[derive(Clone, Debug)]
pub struct TangentVector {
    h: HermitianMatrix,
}

impl TangentVector {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let tr = h.trace();
        if tr.abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "tangent vector must be traceless (trace {tr})"
            )));
        }
        Ok(Self { h })
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.h
    }

    pub fn mat(&self) -> &CMat {
        self.h.mat()
    }
}

fn require_standard(f: &StandardFunction) -> Result<()> {
    if !f.is_standard() {
        return Err(Error::InvalidArgument(format!(
            "operation requires a standard (monotone) function, got {}",
            f.name()
        )));
    }
    Ok(())
}

fn check_dim(rho_dim: usize, a: &CMat) -> Result<()> {
    if a.nrows() != rho_dim || a.ncols() != rho_dim {
        return Err(Error::DimensionMismatch(rho_dim, a.nrows()));
    }
    Ok(())
}

/// Entrywise kernel action in a given spectral frame; `invert` divides
/// instead of multiplying. Shared by J, J⁻¹ and the ODE integrator
/// (which applies J to positive matrices that are not unit trace).
pub(crate) fn apply_kernel_spectral(
    sd: &SpectralDecomposition,
    f: &StandardFunction,
    a: &CMat,
    invert: bool,
) -> CMat {
    let n = sd.dim();
    let lam = sd.eigenvalues();
    let mut b = sd.to_eigenbasis(a);
    for i in 0..n {
        for j in 0..n {
            let c = f.kernel(lam[i], lam[j]);
            b[(i, j)] *= C64::new(if invert { 1.0 / c } else { c }, 0.0);
        }
    }
    sd.from_eigenbasis(&b)
}

/// J_ρ(A): entrywise multiplication by the mean kernel in ρ's eigenbasis.
pub fn apply_j(rho: &DensityMatrix, f: &StandardFunction, a: &CMat) -> Result<CMat> {
    require_standard(f)?;
    check_dim(rho.dim(), a)?;
    Ok(apply_kernel_spectral(&rho.spectral(), f, a, false))
}

/// J_ρ⁻¹(A): entrywise division by the mean kernel.
pub fn apply_j_inverse(rho: &DensityMatrix, f: &StandardFunction, a: &CMat) -> Result<CMat> {
    require_standard(f)?;
    check_dim(rho.dim(), a)?;
    Ok(apply_kernel_spectral(&rho.spectral(), f, a, true))
}

/// γ_ρ^f(A, B) = Σᵢⱼ conj(Aᵢⱼ) Bᵢⱼ / c(λᵢ, λⱼ) in ρ's eigenbasis;
/// sesquilinear (conjugate-linear in A) and equal to Tr A* J_ρ⁻¹(B).
pub fn fisher_metric(rho: &DensityMatrix, f: &StandardFunction, a: &CMat, b: &CMat) -> Result<C64> {
    require_standard(f)?;
    check_dim(rho.dim(), a)?;
    check_dim(rho.dim(), b)?;
    let sd = rho.spectral();
    let at = sd.to_eigenbasis(a);
    let bt = sd.to_eigenbasis(b);
    let lam = sd.eigenvalues();
    let n = sd.dim();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let c = f.kernel(lam[i], lam[j]);
            s += at[(i, j)].conj() * bt[(i, j)] / C64::new(c, 0.0);
        }
    }
    Ok(s)
}

/// Quadratic cost φ_ρ[A, B] = Tr A* J_ρ(B), the dual of the metric.
pub fn quadratic_cost(
    rho: &DensityMatrix,
    f: &StandardFunction,
    a: &CMat,
    b: &CMat,
) -> Result<C64> {
    require_standard(f)?;
    check_dim(rho.dim(), a)?;
    check_dim(rho.dim(), b)?;
    let jb = apply_j(rho, f, b)?;
    Ok((a.adjoint() * jb).trace())
}

/// Symmetric logarithmic derivative: the Hermitian solution of
/// ρL + Lρ = 2A, i.e. Lᵢⱼ = 2Aᵢⱼ/(λᵢ+λⱼ) in ρ's eigenbasis.
pub fn sld(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let l = apply_j_inverse(rho, &StandardFunction::Sld, a.mat())?;
    Ok(HermitianMatrix::symmetrized(&l))
}

/// X shifted to Tr ρX = 0; returns the centered matrix and the shift.
pub fn center(rho: &DensityMatrix, x: &HermitianMatrix) -> (HermitianMatrix, f64) {
    let shift = (rho.mat() * x.mat()).trace().re;
    let mut m = x.mat().clone();
    for i in 0..x.dim() {
        m[(i, i)] -= C64::new(shift, 0.0);
    }
    (HermitianMatrix::symmetrized(&m), shift)
}

/// `i[ρ, X]` — the commutator direction generated by X.
pub fn commutator_direction(rho: &DensityMatrix, x: &HermitianMatrix) -> HermitianMatrix {
    let c = rho.mat() * x.mat() - x.mat() * rho.mat();
    HermitianMatrix::symmetrized(&(c * C64::new(0.0, 1.0)))
}

/// Skew information `(f(0)/2)·γ_ρ^f(i[ρ,X], i[ρ,X])`, evaluated directly
/// from the kernel: `(f(0)/2)·Σᵢⱼ (λᵢ−λⱼ)²|Xᵢⱼ|²/c(λᵢ,λⱼ)`.
pub fn skew_information(
    rho: &DensityMatrix,
    f: &StandardFunction,
    x: &HermitianMatrix,
) -> Result<f64> {
    require_standard(f)?;
    check_dim(rho.dim(), x.mat())?;
    let f0 = f.at_zero();
    if f0 == 0.0 {
        return Ok(0.0);
    }
    let sd = rho.spectral();
    let xt = sd.to_eigenbasis(x.mat());
    let lam = sd.eigenvalues();
    let n = sd.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = lam[i] - lam[j];
            if d != 0.0 {
                s += d * d * xt[(i, j)].norm_sqr() / f.kernel(lam[i], lam[j]);
            }
        }
    }
    Ok(0.5 * f0 * s)
}

/// `|f(0)·γ^f(i[ρ,X], i[ρ,X]) − (2Cov_ρ(X,X) − 2qCov_ρ^f̃(X,X)))`| with
/// X centered internally. Vanishes identically for standard f.
pub fn tilde_identity_gap(
    rho: &DensityMatrix,
    f: &StandardFunction,
    x: &HermitianMatrix,
) -> Result<f64> {
    require_standard(f)?;
    let (xc, _) = center(rho, x);
    let d = commutator_direction(rho, &xc);
    let lhs = f.at_zero() * fisher_metric(rho, f, d.mat(), d.mat())?.re;
    let cov = generalized_covariance(rho, xc.mat(), xc.mat(), &StandardFunction::Sld)?.re;
    let tilde = f.tilde()?;
    let qcov = generalized_covariance(rho, xc.mat(), xc.mat(), &tilde)?.re;
    Ok((lhs - (2.0 * cov - 2.0 * qcov)).abs())
}

/// Central mixed finite difference of `(t, s) ↦ S_F(ρ + t·i[ρ,X] ‖ ρ + s·i[ρ,X])`
/// at the origin, with X centered internally. For F = f̃ this converges
/// at second order in h to `f(0)·γ_ρ^f(i[ρ,X], i[ρ,X])`.
pub fn hessian_fd(
    rho: &DensityMatrix,
    x: &HermitianMatrix,
    big_f: &StandardFunction,
    h: f64,
) -> Result<f64> {
    require_standard(big_f)?;
    if h <= 0.0 {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let (xc, _) = center(rho, x);
    let d = commutator_direction(rho, &xc);
    let state = |t: f64| -> Result<DensityMatrix> {
        let m = HermitianMatrix::symmetrized(&(rho.mat() + d.mat().scale(t)));
        let min = spectral_decompose(&m).min_eigenvalue();
        if min <= 0.0 {
            return Err(Error::StepFailure {
                step: 0,
                min_eig: min,
            });
        }
        crate::matcore::validate_density(m, 0.0)
    };
    let id = CMat::identity(rho.dim(), rho.dim());
    let s = |t: f64, u: f64| -> Result<f64> { quasi_entropy(&state(t)?, &state(u)?, &id, big_f) };
    let pp = s(h, h)?;
    let pm = s(h, -h)?;
    let mp = s(-h, h)?;
    let mm = s(-h, -h)?;
    Ok((pp - pm - mp + mm) / (4.0 * h * h))
}

/// Hessian kernel g_α of the degree-α relative entropy in exponential
/// parametrization: piecewise `(u, α, 1−u)/(α(1−α))` on `[0,α]`, `[α,1−α]`,
/// `[1−α,1]`, with the reflection g_α = g_{1−α}.
pub fn alpha_hessian_kernel(u: f64, a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!(
            "kernel argument must lie in [0,1], got {u}"
        )));
    }
    if !(0.0 < a && a < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0,1), got {a}"
        )));
    }
    let norm = 1.0 / (a * (1.0 - a));
    let aa = a.min(1.0 - a);
    let v = if u <= aa {
        u
    } else if u <= 1.0 - aa {
        aa
    } else {
        1.0 - u
    };
    Ok(norm * v)
}

/// Split a tangent into the part commuting with ρ (block-diagonal over
/// degenerate eigenvalue blocks in ρ's eigenbasis) and the commutator
/// part i[ρ, B] carrying the rest.
pub fn tangent_decompose(
    rho: &DensityMatrix,
    a: &TangentVector,
) -> Result<(TangentVector, TangentVector)> {
    check_dim(rho.dim(), a.mat())?;
    let sd = rho.spectral();
    let at = sd.to_eigenbasis(a.mat());
    let blocks = degenerate_blocks(sd.eigenvalues());
    let n = sd.dim();
    let mut commuting = CMat::zeros(n, n);
    for (i, j) in index_pairs(n) {
        if blocks[i] == blocks[j] {
            commuting[(i, j)] = at[(i, j)];
        }
    }
    let commutator = &at - &commuting;
    let c_part = HermitianMatrix::symmetrized(&sd.from_eigenbasis(&commuting));
    let q_part = HermitianMatrix::symmetrized(&sd.from_eigenbasis(&commutator));
    Ok((TangentVector::new(c_part)?, TangentVector::new(q_part)?))
}

/// Hermitian B with `i[ρ, B]` equal to the commutator part of the tangent.
pub fn tangent_commutator_generator(
    rho: &DensityMatrix,
    a: &TangentVector,
) -> Result<HermitianMatrix> {
    let sd = rho.spectral();
    let at = sd.to_eigenbasis(a.mat());
    let blocks = degenerate_blocks(sd.eigenvalues());
    let lam = sd.eigenvalues();
    let n = sd.dim();
    let mut b = CMat::zeros(n, n);
    for (i, j) in index_pairs(n) {
        if blocks[i] != blocks[j] {
            // i[ρ,B]ᵢⱼ = i(λᵢ−λⱼ)Bᵢⱼ
            b[(i, j)] = at[(i, j)] / C64::new(0.0, lam[i] - lam[j]);
        }
    }
    Ok(HermitianMatrix::symmetrized(&sd.from_eigenbasis(&b)))
}

fn index_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

/// Block label per index: ascending eigenvalues are chained into one
/// block while consecutive gaps stay below the relative degeneracy tol.
fn degenerate_blocks(lam: &[f64]) -> Vec<usize> {
    let mut labels = vec![0usize; lam.len()];
    let mut current = 0;
    for i in 1..lam.len() {
        if (lam[i] - lam[i - 1]).abs() > DEGENERACY_TOL * lam[i].abs().max(lam[i - 1].abs()) {
            current += 1;
        }
        labels[i] = current;
    }
    labels
}
