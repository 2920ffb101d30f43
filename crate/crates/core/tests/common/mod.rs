//! Shared test oracles: adaptive quadrature, independent of the kernel
//! formulas they are used to check.

#![allow(dead_code)]

use qig_core::matcore::{matrix_function, CMat, DensityMatrix, HermitianMatrix};

/// Adaptive Simpson for matrix integrands, error measured in Frobenius
/// norm. Splits until |S(fine) − S(coarse)|/15 < tol on each segment.
pub fn simpson_matrix(f: &dyn Fn(f64) -> CMat, a: f64, b: f64, tol: f64, max_depth: usize) -> CMat {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson_rule(&fa, &fm, &fb, b - a);
    adapt(f, a, b, &fa, &fm, &fb, &whole, tol, max_depth)
}

fn simpson_rule(fa: &CMat, fm: &CMat, fb: &CMat, h: f64) -> CMat {
    (fa + fm.scale(4.0) + fb).scale(h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &dyn Fn(f64) -> CMat,
    a: f64,
    b: f64,
    fa: &CMat,
    fm: &CMat,
    fb: &CMat,
    whole: &CMat,
    tol: f64,
    depth: usize,
) -> CMat {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_rule(fa, &flm, fm, m - a);
    let right = simpson_rule(fm, &frm, fb, b - m);
    let refined = &left + &right;
    let err = (&refined - whole).norm() / 15.0;
    if depth == 0 || err < tol {
        return refined;
    }
    adapt(f, a, m, fa, &flm, fm, &left, tol / 2.0, depth - 1)
        + adapt(f, m, b, fm, &frm, fb, &right, tol / 2.0, depth - 1)
}

/// Scalar adaptive Simpson.
pub fn simpson_scalar(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let g = |x: f64| CMat::from_element(1, 1, qig_core::C64::new(f(x), 0.0));
    simpson_matrix(&g, a, b, tol, 50)[(0, 0)].re
}

/// ∫₀^∞ (ρ+t)⁻¹ A (ρ+t)⁻¹ dt — the Kubo–Mori J⁻¹ — by adaptive Simpson
/// truncated at t = 1e6 over geometric segments. Returns the integral and
/// the analytic tail bound ‖A‖/T.
pub fn km_j_inverse_quadrature(rho: &DensityMatrix, a: &CMat) -> (CMat, f64) {
    let n = rho.dim();
    let integrand = |t: f64| -> CMat {
        let mut shifted = rho.mat().clone();
        for i in 0..n {
            shifted[(i, i)] += qig_core::C64::new(t, 0.0);
        }
        let inv = shifted.try_inverse().expect("rho + t invertible");
        &inv * a * &inv
    };
    let cuts = [0.0, 0.5, 1.0, 4.0, 16.0, 1e2, 1e3, 1e4, 1e5, 1e6];
    let mut total = CMat::zeros(n, n);
    for w in cuts.windows(2) {
        total += simpson_matrix(&integrand, w[0], w[1], 1e-9, 48);
    }
    (total, a.norm() / 1e6)
}

/// ∫₀^∞ e^{−tρ/2} A e^{−tρ/2} dt — the SLD J⁻¹. The integrand decays
/// exponentially, so truncation error at the cut is negligible.
pub fn sld_j_inverse_quadrature(rho: &DensityMatrix, a: &CMat) -> CMat {
    let min = rho.spectral().min_eigenvalue();
    let cutoff = (40.0 / min).min(1e6);
    let integrand = |t: f64| -> CMat {
        let e = matrix_function(rho.hermitian(), |x| (-t * x / 2.0).exp()).unwrap();
        e.mat() * a * e.mat()
    };
    let cuts = [0.0, 0.1, 1.0, 10.0, 100.0, cutoff.max(200.0)];
    let n = rho.dim();
    let mut total = CMat::zeros(n, n);
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            total += simpson_matrix(&integrand, w[0], w[1], 1e-10, 48);
        }
    }
    total
}

/// ∫₀¹ Tr A ρ^s B ρ^{1−s} ds — the Kubo–Mori quadratic cost.
pub fn km_cost_quadrature(rho: &DensityMatrix, a: &CMat, b: &CMat) -> f64 {
    let f = |s: f64| -> f64 {
        let rs = matrix_function(rho.hermitian(), |x| x.powf(s)).unwrap();
        let r1s = matrix_function(rho.hermitian(), |x| x.powf(1.0 - s)).unwrap();
        (a * rs.mat() * b * r1s.mat()).trace().re
    };
    simpson_scalar(&f, 0.0, 1.0, 1e-11)
}

/// Frobenius distance relative to the norm of the reference.
pub fn rel_diff(got: &CMat, want: &CMat) -> f64 {
    (got - want).norm() / want.norm().max(1e-300)
}

/// Build a Hermitian matrix from a plain complex matrix (symmetrizing).
pub fn herm(m: &CMat) -> HermitianMatrix {
    HermitianMatrix::symmetrized(m)
}
