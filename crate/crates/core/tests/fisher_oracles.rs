//! Quadrature oracles for the superoperator calculus: the closed-form
//! kernels must reproduce the defining integrals.

mod common;

use common::{km_cost_quadrature, km_j_inverse_quadrature, rel_diff, sld_j_inverse_quadrature};
use qig_core::estimation::{locally_unbiased_check, StatisticalModel};
use qig_core::fisher::{apply_j_inverse, center, quadratic_cost};
use qig_core::matcore::{matrix_function, random_density_rng, random_hermitian, HermitianMatrix};
use qig_core::seed;
use qig_core::stdfunc::StandardFunction;

#[test]
fn km_j_inverse_matches_resolvent_integral() {
    for trial in 0..5u64 {
        let mut rng = seed::trial_rng(71, trial);
        let dim = 2 + (trial as usize) % 2;
        let rho = random_density_rng(dim, 1e-3, &mut rng);
        let a = random_hermitian(dim, &mut rng);
        let closed = apply_j_inverse(&rho, &StandardFunction::KuboMori, a.mat()).unwrap();
        let (quad, tail) = km_j_inverse_quadrature(&rho, a.mat());
        let err = (&closed - &quad).norm();
        let allowed = 1e-6 * closed.norm().max(1.0) + tail;
        assert!(tail < 1e-5, "tail bound too large: {tail}");
        assert!(err < allowed, "trial {trial}: {err} vs allowed {allowed}");
    }
}

#[test]
fn sld_j_inverse_matches_semigroup_integral() {
    for trial in 0..5u64 {
        let mut rng = seed::trial_rng(72, trial);
        let dim = 2 + (trial as usize) % 2;
        let rho = random_density_rng(dim, 1e-3, &mut rng);
        let a = random_hermitian(dim, &mut rng);
        let closed = apply_j_inverse(&rho, &StandardFunction::Sld, a.mat()).unwrap();
        let quad = sld_j_inverse_quadrature(&rho, a.mat());
        let rel = rel_diff(&quad, &closed);
        assert!(rel < 1e-6, "trial {trial}: relative error {rel}");
    }
}

#[test]
fn km_cost_matches_interpolation_integral() {
    for trial in 0..5u64 {
        let mut rng = seed::trial_rng(73, trial);
        let rho = random_density_rng(2, 1e-3, &mut rng);
        let a = random_hermitian(2, &mut rng);
        let b = random_hermitian(2, &mut rng);
        let closed = quadratic_cost(&rho, &StandardFunction::KuboMori, a.mat(), b.mat())
            .unwrap()
            .re;
        let quad = km_cost_quadrature(&rho, a.mat(), b.mat());
        assert!(
            (closed - quad).abs() < 1e-8 * closed.abs().max(1.0),
            "trial {trial}: {closed} vs {quad}"
        );
    }
}

#[test]
fn alpha_hessian_kernel_reproduces_exponential_hessian() {
    // the piecewise kernel integrates the degree-α Hessian in exponential
    // parametrization: ∂²/∂t∂s Tr[e^{α(H+tA)} e^{(1−α)(H+sB)}]/(α(1−α))
    // = ∫₀¹ Tr e^{(1−u)H} B e^{uH} A · g_α(u) du
    use common::simpson_scalar;
    use qig_core::fisher::alpha_hessian_kernel;

    let mut rng = seed::rng_from(75);
    let scale = |m: &HermitianMatrix, c: f64| HermitianMatrix::symmetrized(&m.mat().scale(c));
    let h = scale(&random_hermitian(3, &mut rng), 0.6);
    let a = random_hermitian(3, &mut rng);
    let b = random_hermitian(3, &mut rng);

    for alpha in [0.25, 0.3, 0.5] {
        let tr_term = |t: f64, s: f64| -> f64 {
            let xa = matrix_function(
                &HermitianMatrix::symmetrized(&(h.mat() + a.mat().scale(t)).scale(alpha)),
                f64::exp,
            )
            .unwrap();
            let yb = matrix_function(
                &HermitianMatrix::symmetrized(
                    &(h.mat() + b.mat().scale(s)).scale(1.0 - alpha),
                ),
                f64::exp,
            )
            .unwrap();
            (xa.mat() * yb.mat()).trace().re
        };
        let step = 1e-4;
        let mixed = (tr_term(step, step) - tr_term(step, -step) - tr_term(-step, step)
            + tr_term(-step, -step))
            / (4.0 * step * step)
            / (alpha * (1.0 - alpha));

        let integrand = |u: f64| -> f64 {
            let eu = matrix_function(&scale(&h, u), f64::exp).unwrap();
            let e1u = matrix_function(&scale(&h, 1.0 - u), f64::exp).unwrap();
            (e1u.mat() * b.mat() * eu.mat() * a.mat()).trace().re
                * alpha_hessian_kernel(u, alpha).unwrap()
        };
        // split at the kernel kinks so Simpson converges cleanly
        let cuts = [0.0, alpha.min(1.0 - alpha), alpha.max(1.0 - alpha), 1.0];
        let mut integral = 0.0;
        for w in cuts.windows(2) {
            if w[1] > w[0] {
                integral += simpson_scalar(&integrand, w[0], w[1], 1e-11);
            }
        }
        let rel = (mixed - integral).abs() / integral.abs().max(1.0);
        assert!(rel < 1e-5, "alpha {alpha}: {mixed} vs {integral} ({rel})");
    }
}

#[test]
fn km_family_locally_unbiased_with_quadrature_normalizer() {
    // normalizer computed by the integral oracle rather than the kernel
    let mut rng = seed::rng_from(74);
    let rho0 = random_density_rng(3, 1e-3, &mut rng);
    let h = matrix_function(rho0.hermitian(), f64::ln).unwrap();
    let raw = random_hermitian(3, &mut rng);
    let (t, _) = center(&rho0, &raw);
    let n = km_cost_quadrature(&rho0, t.mat(), t.mat());
    let a = HermitianMatrix::symmetrized(&t.mat().scale(1.0 / n));
    let model = StatisticalModel::km_exponential(h, vec![t]).unwrap();
    let d = locally_unbiased_check(&model, &a, 0.0).unwrap();
    assert!((d - 1.0).abs() < 1e-5, "derivative {d}");
}
