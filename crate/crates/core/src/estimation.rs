//! Quantum statistical models and estimation: score operators, Fisher
//! information matrices, the matrix Cramér–Rao inequality with bias, and
//! exponential-family flows D'(θ) = J_{D(θ)}(T).
//!
//! Built-in model families:
//!
//! - affine      ρ(θ) = ρ₀ + Σθᵢ Bᵢ with traceless Hermitian generators;
//! - sld-exp     ρ(θ) ∝ e^{(Σθᵢ Tᵢ)/2} ρ₀ e^{(Σθᵢ Tᵢ)/2};
//! - km-exp      ρ(θ) ∝ exp(H + Σθᵢ Tᵢ).
//!
//! Tangents are analytic for the affine family and central differences
//! (h = 1e-5) for the exponential ones. Built-ins are intended for the
//! parameter box |θᵢ| ≤ 0.5, which keeps states well conditioned.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::{apply_kernel_spectral, fisher_metric};
use crate::matcore::{
    matrix_function, spectral_decompose, validate_density, CMat, DensityMatrix, HermitianMatrix,
    SpectralDecomposition,
};
use crate::quasient::generalized_covariance;
use crate::stdfunc::StandardFunction;

/// Step for the central differences behind tangents and bias derivatives.
pub const FD_STEP: f64 = 1e-5;

/// Inner product used for scores, information matrices and cost Grams.
#[derive(Clone, Debug, PartialEq)]
pub enum CostKernel {
    /// `φ[A,B] = Tr A*B`; the identity superoperator.
    HilbertSchmidt,
    /// `φ[A,B] = Tr A* J_ρ(B)` for a standard monotone generator.
    Monotone(StandardFunction),
}

impl CostKernel {
    /// Parse `hs` or any standard-function selector.
    pub fn parse(selector: &str) -> Result<Self> {
        if selector == "hs" {
            return Ok(Self::HilbertSchmidt);
        }
        let f = StandardFunction::parse(selector)?;
        if !f.is_standard() {
            return Err(Error::InvalidArgument(format!(
                "cost kernel requires a standard function, got {}",
                f.name()
            )));
        }
        Ok(Self::Monotone(f))
    }

    pub fn name(&self) -> String {
        match self {
            Self::HilbertSchmidt => "hs".into(),
            Self::Monotone(f) => f.name(),
        }
    }
}

#[derive(Clone, Debug)]
enum ModelKind {
    Affine {
        rho0: DensityMatrix,
        generators: Vec<HermitianMatrix>,
    },
    SldExponential {
        rho0: DensityMatrix,
        generators: Vec<HermitianMatrix>,
    },
    KmExponential {
        h: HermitianMatrix,
        generators: Vec<HermitianMatrix>,
    },
}

/// A parametrized family θ ↦ ρ(θ) of invertible densities with tangents.
#[derive(Clone, Debug)]
pub struct StatisticalModel {
    kind: ModelKind,
    dim: usize,
    m: usize,
}

fn check_generators(dim: usize, generators: &[HermitianMatrix]) -> Result<()> {
    if generators.is_empty() {
        return Err(Error::InvalidArgument(
            "model needs at least one generator".into(),
        ));
    }
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch(dim, g.dim()));
        }
    }
    Ok(())
}

impl StatisticalModel {
    /// ρ(θ) = ρ₀ + Σθᵢ Bᵢ with traceless Hermitian generators.
    pub fn affine(rho0: DensityMatrix, generators: Vec<HermitianMatrix>) -> Result<Self> {
        check_generators(rho0.dim(), &generators)?;
        for g in &generators {
            if g.trace().abs() > 1e-10 {
                return Err(Error::InvalidArgument(
                    "affine generators must be traceless".into(),
                ));
            }
        }
        Ok(Self {
            dim: rho0.dim(),
            m: generators.len(),
            kind: ModelKind::Affine { rho0, generators },
        })
    }

    /// ρ(θ) ∝ e^{K/2} ρ₀ e^{K/2} with K = Σθᵢ Tᵢ.
    pub fn sld_exponential(rho0: DensityMatrix, generators: Vec<HermitianMatrix>) -> Result<Self> {
        check_generators(rho0.dim(), &generators)?;
        Ok(Self {
            dim: rho0.dim(),
            m: generators.len(),
            kind: ModelKind::SldExponential { rho0, generators },
        })
    }

    /// ρ(θ) ∝ exp(H + Σθᵢ Tᵢ).
    pub fn km_exponential(h: HermitianMatrix, generators: Vec<HermitianMatrix>) -> Result<Self> {
        check_generators(h.dim(), &generators)?;
        Ok(Self {
            dim: h.dim(),
            m: generators.len(),
            kind: ModelKind::KmExponential { h, generators },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn param_count(&self) -> usize {
        self.m
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.m {
            return Err(Error::DimensionMismatch(self.m, theta.len()));
        }
        Ok(())
    }

    pub fn state_at(&self, theta: &[f64]) -> Result<DensityMatrix> {
        self.check_theta(theta)?;
        match &self.kind {
            ModelKind::Affine { rho0, generators } => {
                let mut m = rho0.mat().clone();
                for (t, g) in theta.iter().zip(generators) {
                    m += g.mat().scale(*t);
                }
                let h = HermitianMatrix::symmetrized(&m);
                let min = spectral_decompose(&h).min_eigenvalue();
                if min <= 0.0 {
                    return Err(Error::Positivity {
                        found: min,
                        floor: 0.0,
                    });
                }
                validate_density(h, 0.0)
            }
            ModelKind::SldExponential { rho0, generators } => {
                let mut k = CMat::zeros(self.dim, self.dim);
                for (t, g) in theta.iter().zip(generators) {
                    k += g.mat().scale(*t / 2.0);
                }
                let e = matrix_function(&HermitianMatrix::symmetrized(&k), f64::exp)?;
                let d = e.mat() * rho0.mat() * e.mat();
                normalize_positive(&d)
            }
            ModelKind::KmExponential { h, generators } => {
                let mut k = h.mat().clone();
                for (t, g) in theta.iter().zip(generators) {
                    k += g.mat().scale(*t);
                }
                let d = matrix_function(&HermitianMatrix::symmetrized(&k), f64::exp)?;
                normalize_positive(d.mat())
            }
        }
    }

    /// ∂ρ/∂θᵢ — analytic for affine, central difference otherwise.
    pub fn tangent_at(&self, theta: &[f64], i: usize) -> Result<HermitianMatrix> {
        self.check_theta(theta)?;
        if i >= self.m {
            return Err(Error::InvalidArgument(format!(
                "tangent index {i} out of range 0..{}",
                self.m
            )));
        }
        if let ModelKind::Affine { generators, .. } = &self.kind {
            return Ok(generators[i].clone());
        }
        let mut plus = theta.to_vec();
        let mut minus = theta.to_vec();
        plus[i] += FD_STEP;
        minus[i] -= FD_STEP;
        let rp = self.state_at(&plus)?;
        let rm = self.state_at(&minus)?;
        Ok(HermitianMatrix::symmetrized(
            &((rp.mat() - rm.mat()).scale(1.0 / (2.0 * FD_STEP))),
        ))
    }

    pub fn tangents_at(&self, theta: &[f64]) -> Result<Vec<HermitianMatrix>> {
        (0..self.m).map(|i| self.tangent_at(theta, i)).collect()
    }
}

fn normalize_positive(d: &CMat) -> Result<DensityMatrix> {
    let tr = d.trace().re;
    if !(tr.is_finite() && tr > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "state normalizer is not positive ({tr})"
        )));
    }
    validate_density(HermitianMatrix::symmetrized(&d.scale(1.0 / tr)), 0.0)
}

/// A collection of Hermitian estimators A₁..A_m.
#[derive(Clone, Debug)]
pub struct EstimatorSet {
    ops: Vec<HermitianMatrix>,
}

impl EstimatorSet {
    pub fn new(ops: Vec<HermitianMatrix>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidArgument("empty estimator set".into()));
        }
        Ok(Self { ops })
    }

    pub fn ops(&self) -> &[HermitianMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// φ[A,B] under the chosen cost at the state ρ. The monotone cost is the
/// centered generalized covariance; scores are automatically centered, so
/// the centering only affects estimator Grams.
fn cost_inner(rho: &DensityMatrix, cost: &CostKernel, a: &CMat, b: &CMat) -> Result<f64> {
    match cost {
        CostKernel::HilbertSchmidt => Ok((a.adjoint() * b).trace().re),
        CostKernel::Monotone(f) => Ok(generalized_covariance(rho, a, b, f)?.re),
    }
}

/// Quantum score operators Lᵢ = J⁻¹(∂ᵢρ). For the Hilbert–Schmidt cost
/// J is the identity and the scores coincide with the tangents.
pub fn scores(
    model: &StatisticalModel,
    theta: &[f64],
    cost: &CostKernel,
) -> Result<Vec<HermitianMatrix>> {
    let rho = model.state_at(theta)?;
    let sd = rho.spectral();
    model
        .tangents_at(theta)?
        .into_iter()
        .map(|t| match cost {
            CostKernel::HilbertSchmidt => Ok(t),
            CostKernel::Monotone(f) => Ok(HermitianMatrix::symmetrized(&apply_kernel_spectral(
                &sd,
                f,
                t.mat(),
                true,
            ))),
        })
        .collect()
}

/// Fisher information Gram of explicit tangents at an explicit state,
/// Iᵢⱼ = γ^f(∂ᵢρ, ∂ⱼρ) (or Tr ∂ᵢρ ∂ⱼρ for the Hilbert–Schmidt cost).
pub fn fisher_matrix_parts(
    rho: &DensityMatrix,
    tangents: &[HermitianMatrix],
    cost: &CostKernel,
) -> Result<DMatrix<f64>> {
    let m = tangents.len();
    let mut out = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = match cost {
                CostKernel::HilbertSchmidt => {
                    (tangents[i].mat().adjoint() * tangents[j].mat()).trace().re
                }
                CostKernel::Monotone(f) => {
                    fisher_metric(rho, f, tangents[i].mat(), tangents[j].mat())?.re
                }
            };
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}

/// The m×m quantum Fisher information matrix of the model at θ.
pub fn fisher_matrix(
    model: &StatisticalModel,
    theta: &[f64],
    cost: &CostKernel,
) -> Result<DMatrix<f64>> {
    let rho = model.state_at(theta)?;
    let tangents = model.tangents_at(theta)?;
    fisher_matrix_parts(&rho, &tangents, cost)
}

/// Cramér–Rao residual `φ[A] − K J⁻¹ K*` with `Kᵢⱼ = ∂_{θⱼ} Tr ρ(θ)Aᵢ`
/// (bias derivatives by central differences). Positive semidefinite
/// within tolerance; zero exactly at the equality models.
pub fn cramer_rao_residual(
    model: &StatisticalModel,
    est: &EstimatorSet,
    theta: &[f64],
    cost: &CostKernel,
) -> Result<DMatrix<f64>> {
    let m = model.param_count();
    if est.len() != m {
        return Err(Error::DimensionMismatch(m, est.len()));
    }
    let rho = model.state_at(theta)?;
    let j = fisher_matrix(model, theta, cost)?;
    let min_eig = crate::channels::min_symmetric_eigenvalue(&j);
    if min_eig <= 1e-10 {
        return Err(Error::Singular(min_eig));
    }
    let j_inv = j.clone().try_inverse().ok_or(Error::Singular(min_eig))?;

    let mut c = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for k in i..m {
            let v = cost_inner(&rho, cost, est.ops()[i].mat(), est.ops()[k].mat())?;
            c[(i, k)] = v;
            c[(k, i)] = v;
        }
    }

    // Kᵢⱼ = ∂_{θⱼ} Tr ρ(θ)Aᵢ = δᵢⱼ + ∂_{θⱼ}bᵢ(θ)
    let mut kmat = DMatrix::<f64>::zeros(m, m);
    for jdx in 0..m {
        let mut plus = theta.to_vec();
        let mut minus = theta.to_vec();
        plus[jdx] += FD_STEP;
        minus[jdx] -= FD_STEP;
        let rp = model.state_at(&plus)?;
        let rm = model.state_at(&minus)?;
        for i in 0..m {
            let ep = (rp.mat() * est.ops()[i].mat()).trace().re;
            let em = (rm.mat() * est.ops()[i].mat()).trace().re;
            kmat[(i, jdx)] = (ep - em) / (2.0 * FD_STEP);
        }
    }

    Ok(&c - &kmat * j_inv * kmat.transpose())
}

/// Finite-difference derivative of θ ↦ Tr ρ(θ)A at `theta0` for a
/// scalar-parameter model; equals 1 for a locally unbiased estimator.
pub fn locally_unbiased_check(
    model: &StatisticalModel,
    a: &HermitianMatrix,
    theta0: f64,
) -> Result<f64> {
    if model.param_count() != 1 {
        return Err(Error::InvalidArgument(
            "locally unbiased check needs a scalar-parameter model".into(),
        ));
    }
    let rp = model.state_at(&[theta0 + FD_STEP])?;
    let rm = model.state_at(&[theta0 - FD_STEP])?;
    Ok(((rp.mat() - rm.mat()) * a.mat()).trace().re / (2.0 * FD_STEP))
}

/// Grid of unnormalized flow matrices D(θ) and their normalized states.
#[derive(Clone, Debug)]
pub struct EvolvePath {
    pub thetas: Vec<f64>,
    pub unnormalized: Vec<HermitianMatrix>,
    pub states: Vec<DensityMatrix>,
}

impl EvolvePath {
    pub fn final_unnormalized(&self) -> &HermitianMatrix {
        self.unnormalized.last().expect("nonempty path")
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("nonempty path")
    }
}

/// Integrate D'(θ) = J_{D(θ)}(T), D(0) = ρ₀ with classic fourth-order
/// Runge–Kutta on a fixed grid, monitoring positivity at every stage.
/// The SLD kernel reproduces e^{θT/2} ρ₀ e^{θT/2}; the Kubo–Mori kernel
/// reproduces exp(log ρ₀ + θT).
pub fn exp_family_evolve(
    rho0: &DensityMatrix,
    t: &HermitianMatrix,
    theta_max: f64,
    f: &StandardFunction,
    steps: usize,
) -> Result<EvolvePath> {
    if steps < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 steps, got {steps}"
        )));
    }
    if !f.is_standard() {
        return Err(Error::InvalidArgument(format!(
            "flow kernel must be standard, got {}",
            f.name()
        )));
    }
    if t.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch(rho0.dim(), t.dim()));
    }
    let h = theta_max / steps as f64;
    let mut d = rho0.hermitian().clone();
    let mut thetas = vec![0.0];
    let mut unnormalized = vec![d.clone()];
    let mut states = vec![rho0.clone()];

    let stage = |m: &CMat, step: usize| -> Result<SpectralDecomposition> {
        let sd = spectral_decompose(&HermitianMatrix::symmetrized(m));
        let min = sd.min_eigenvalue();
        if min <= 0.0 {
            return Err(Error::StepFailure { step, min_eig: min });
        }
        Ok(sd)
    };

    for s in 0..steps {
        let y = d.mat();
        let k1 = apply_kernel_spectral(&stage(y, s)?, f, t.mat(), false);
        let k2 = apply_kernel_spectral(&stage(&(y + k1.scale(h / 2.0)), s)?, f, t.mat(), false);
        let k3 = apply_kernel_spectral(&stage(&(y + k2.scale(h / 2.0)), s)?, f, t.mat(), false);
        let k4 = apply_kernel_spectral(&stage(&(y + k3.scale(h)), s)?, f, t.mat(), false);
        let next = y + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);
        d = HermitianMatrix::symmetrized(&next);
        let sd = stage(d.mat(), s + 1)?;
        let tr = sd.eigenvalues().iter().sum::<f64>();
        thetas.push(h * (s as f64 + 1.0));
        unnormalized.push(d.clone());
        states.push(validate_density(
            HermitianMatrix::symmetrized(&d.mat().scale(1.0 / tr)),
            0.0,
        )?);
    }

    Ok(EvolvePath {
        thetas,
        unnormalized,
        states,
    })
}

/// On-disk model description; matrix fields are paths to matrix files,
/// resolved by the caller.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    /// One of `affine`, `sld-exp`, `km-exp`.
    pub kind: String,
    /// Base state file (affine, sld-exp).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<String>,
    /// Hamiltonian file (km-exp).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    pub generators: Vec<String>,
    #[serde(default)]
    pub estimators: Vec<String>,
}
