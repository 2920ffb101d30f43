//! # qig-core
//!
//! Quantum information geometry on finite-dimensional density matrices:
//! quasi-entropies, monotone Fisher metrics, quadratic cost functionals,
//! Cramér–Rao bounds and the determinant uncertainty relation, together
//! with the randomized harnesses that certify every inequality the
//! library claims.
//!
//! The building blocks:
//!
//! - [`matcore`] — Hermitian spectral calculus (eigendecompositions,
//!   matrix functions, trace norms, seeded random states).
//! - [`classical`] — Csiszár f-divergence on finite probability vectors,
//!   partition coarse-graining, Pinsker gaps.
//! - [`stdfunc`] — registry of standard operator monotone functions
//!   (SLD, harmonic, Kubo–Mori, WYD, Hansen extremals and mixtures),
//!   the f̃ transform and numerical standard-ness certification.
//! - [`quasient`] — quasi-entropy S_f^A(ρ₁‖ρ₂), relative entropies,
//!   generalized covariances, quantum Pinsker.
//! - [`fisher`] — the superoperator J_ρ, monotone metrics γ_ρ^f,
//!   quadratic costs, SLD, skew information, tangent decomposition.
//! - [`channels`] — CPTP coarse-grainings in Kraus form and the
//!   monotonicity harness.
//! - [`estimation`] — statistical models, quantum score operators,
//!   Fisher information matrices, matrix Cramér–Rao, exponential-family
//!   flows.
//! - [`uncertainty`] — determinant uncertainty: covariance Gram vs
//!   skew-information Gram.
//! - [`suites`] — seeded verification suites with machine-readable
//!   reports (the backend of `qig verify`).
//!
//! All quantities use natural logarithms. Every randomized routine is
//! driven by a single 64-bit master seed; per-trial generators are
//! derived through [`seed::trial_seed`], so results are reproducible
//! and independent of the number of worker threads.

pub use nalgebra;

pub mod channels;
pub mod classical;
pub mod error;
pub mod estimation;
pub mod fisher;
pub mod matcore;
pub mod quasient;
pub mod seed;
pub mod stdfunc;
pub mod suites;
pub mod uncertainty;

pub use channels::QuantumChannel;
pub use classical::{DivergenceFunction, Partition, ProbabilityVector};
pub use error::{Error, Result};
pub use estimation::{CostKernel, EstimatorSet, StatisticalModel};
pub use fisher::{MeanKernel, TangentVector};
pub use matcore::{CMat, DensityMatrix, HermitianMatrix, SpectralDecomposition, C64};
pub use stdfunc::{Orientation, StandardFunction};
pub use suites::{SuiteConfig, SuiteReport};
