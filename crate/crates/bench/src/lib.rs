//! Shared setup for the benchmark targets.

use qig_core::matcore::{random_density_rng, random_hermitian};
use qig_core::{seed, DensityMatrix, HermitianMatrix};

/// Deterministic state/observable pair for a benchmark case.
pub fn state_and_observable(dim: usize, s: u64) -> (DensityMatrix, HermitianMatrix) {
    let mut rng = seed::rng_from(s);
    let rho = random_density_rng(dim, 1e-6, &mut rng);
    let a = random_hermitian(dim, &mut rng);
    (rho, a)
}
