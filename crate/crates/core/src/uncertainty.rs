//! Determinant uncertainty relation: the covariance Gram of a family of
//! centered observables dominates the skew-information Gram,
//!
//!   det[ qCov_ρ^g(Aᵢ,Aⱼ) ] ≥ det[ 2g(0)·I_ρ^f(Aᵢ,Aⱼ) ],
//!
//! where I^f(X,Y) = Cov(X,Y) − qCov^f̃(X,Y) is the skew information as a
//! sesquilinear form. The scalar engine behind it is the standard-function
//! inequality f(x)g(x) ≥ f(0)g(0)(x−1)².

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matcore::{DensityMatrix, HermitianMatrix};
use crate::quasient::generalized_covariance;
use crate::stdfunc::StandardFunction;

/// Covariance and skew-information Grams built from one operator family.
#[derive(Clone, Debug)]
pub struct GramPair {
    /// [qCov^g(Aᵢ,Aⱼ)] on the centered operators.
    pub cov: DMatrix<f64>,
    /// [2g(0)·I^f(Aᵢ,Aⱼ)] on the same operators.
    pub skew: DMatrix<f64>,
}

fn require_standard(f: &StandardFunction) -> Result<()> {
    if !f.is_standard() {
        return Err(Error::InvalidArgument(format!(
            "uncertainty relation requires standard functions, got {}",
            f.name()
        )));
    }
    Ok(())
}

/// Build both Grams at ρ. Operators are centered to Tr ρAᵢ = 0
/// internally; the skew Gram goes through the f̃ route rather than
/// commutators, which pins its normalization to the covariance side.
pub fn gram_pair(
    rho: &DensityMatrix,
    f: &StandardFunction,
    g: &StandardFunction,
    ops: &[HermitianMatrix],
) -> Result<GramPair> {
    require_standard(f)?;
    require_standard(g)?;
    if ops.is_empty() {
        return Err(Error::InvalidArgument("empty operator family".into()));
    }
    let centered: Vec<HermitianMatrix> = ops
        .iter()
        .map(|a| crate::fisher::center(rho, a).0)
        .collect();
    let m = centered.len();
    let tilde = f.tilde()?;
    let g0 = g.at_zero();
    let mut cov = DMatrix::<f64>::zeros(m, m);
    let mut skew = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let a = centered[i].mat();
            let b = centered[j].mat();
            let c = generalized_covariance(rho, a, b, g)?.re;
            let plain = generalized_covariance(rho, a, b, &StandardFunction::Sld)?.re;
            let tilded = generalized_covariance(rho, a, b, &tilde)?.re;
            let s = 2.0 * g0 * (plain - tilded);
            cov[(i, j)] = c;
            cov[(j, i)] = c;
            skew[(i, j)] = s;
            skew[(j, i)] = s;
        }
    }
    Ok(GramPair { cov, skew })
}

/// Determinant through the spectral product of the symmetric Gram.
fn spectral_determinant(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()).scale(0.5);
    sym.symmetric_eigen().eigenvalues.iter().product()
}

/// det(cov Gram) − det(skew Gram); nonnegative within tolerance.
pub fn uncertainty_residual(
    rho: &DensityMatrix,
    f: &StandardFunction,
    g: &StandardFunction,
    ops: &[HermitianMatrix],
) -> Result<f64> {
    let pair = gram_pair(rho, f, g, ops)?;
    Ok(spectral_determinant(&pair.cov) - spectral_determinant(&pair.skew))
}

/// Minimal eigenvalue of cov − skew: the Gram ordering behind the
/// determinant inequality.
pub fn gram_domination_check(cov: &DMatrix<f64>, skew: &DMatrix<f64>) -> f64 {
    crate::channels::min_symmetric_eigenvalue(&(cov - skew))
}

/// f(x)g(x) − f(0)g(0)(x−1)² at x > 0; nonnegative for standard f, g.
pub fn gibi_margin(f: &StandardFunction, g: &StandardFunction, x: f64) -> Result<f64> {
    require_standard(f)?;
    require_standard(g)?;
    if x <= 0.0 || x.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "margin argument must be positive, got {x}"
        )));
    }
    let d = x - 1.0;
    Ok(f.eval(x) * g.eval(x) - f.at_zero() * g.at_zero() * d * d)
}
