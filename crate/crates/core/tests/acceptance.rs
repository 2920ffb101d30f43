//! Acceptance gate: every release criterion as one test, each printing a
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Tolerances and trial counts are pinned here; the suites they drive are
//! the same ones behind `qig verify`.

mod common;

use std::time::Instant;

use common::km_cost_quadrature;
use qig_core::channels::MonotoneQuantity;
use qig_core::estimation::{cramer_rao_residual, CostKernel, EstimatorSet, StatisticalModel};
use qig_core::fisher::center;
use qig_core::matcore::{matrix_function, random_density_rng, random_hermitian, HermitianMatrix};
use qig_core::seed;
use qig_core::suites::*;
use qig_core::SuiteConfig;

const MASTER_SEED: u64 = 20_260_810;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

fn cfg(trials: usize, tol: f64) -> SuiteConfig {
    SuiteConfig::new(trials, MASTER_SEED, tol).unwrap()
}

#[test]
fn criterion_01_oracle_equivalence() {
    let started = Instant::now();
    let r = run_oracle_equivalence(&cfg(200, 1e-10)).unwrap();
    let elapsed = started.elapsed().as_secs_f64();
    report(
        "01 oracle equivalence",
        r.pass && elapsed < 30.0,
        &format!(
            "max relative error {:.3e} over 200 trials, all registry functions, {elapsed:.2}s",
            -r.worst_gap
        ),
    );
}

#[test]
fn criterion_02_classical_monotonicity() {
    let r = run_classical_monotonicity(&cfg(500, 1e-12)).unwrap();
    report(
        "02 classical monotonicity",
        r.pass,
        &format!("worst gap {:.3e} over 500 trials", r.worst_gap),
    );
}

#[test]
fn criterion_03_quantum_monotonicity() {
    let r = run_quantum_monotonicity(&cfg(500, 1e-9), MonotoneQuantity::Quasi).unwrap();
    report(
        "03 quantum monotonicity",
        r.pass,
        &format!(
            "worst sign-adjusted gap {:.3e} over 500 trials; {}",
            r.worst_gap,
            r.details.join("; ")
        ),
    );
}

#[test]
fn criterion_04_pinsker_suites() {
    let r = run_pinsker(&cfg(500, 1e-10)).unwrap();
    report(
        "04 pinsker (classical + quantum)",
        r.pass,
        &format!("worst gap {:.3e} over 500 paired trials", r.worst_gap),
    );
}

#[test]
fn criterion_05_fixture_values() {
    let r = run_fixtures(&cfg(1, 1e-12)).unwrap();
    report("05 fixture values", r.pass, &r.details.join("; "));
}

#[test]
fn criterion_06_tilde_program() {
    let r = run_tilde_program(&cfg(200, 1e-9)).unwrap();
    report(
        "06 f-tilde program",
        r.pass,
        &format!(
            "worst identity gap {:.3e} over 200 trials; {}",
            -r.worst_gap,
            r.details.join("; ")
        ),
    );
}

#[test]
fn criterion_07_metric_ordering() {
    let r = run_metric_ordering(&cfg(200, 1e-11)).unwrap();
    report(
        "07 metric ordering / extremality",
        r.pass,
        &format!(
            "worst normalized envelope gap {:.3e} over 200 trials",
            r.worst_gap
        ),
    );
}

#[test]
fn criterion_08_cramer_rao() {
    let r = run_cramer_rao(&cfg(200, 1e-8)).unwrap();

    // equality case with the quadrature-based normalizer
    let mut rng = seed::rng_from(MASTER_SEED ^ 0x0808);
    let rho0 = random_density_rng(2, 1e-2, &mut rng);
    let h = matrix_function(rho0.hermitian(), f64::ln).unwrap();
    let raw = random_hermitian(2, &mut rng);
    let (t, _) = center(&rho0, &raw);
    let n = km_cost_quadrature(&rho0, t.mat(), t.mat());
    let a = HermitianMatrix::symmetrized(&t.mat().scale(1.0 / n));
    let model = StatisticalModel::km_exponential(h, vec![t]).unwrap();
    let res = cramer_rao_residual(
        &model,
        &EstimatorSet::new(vec![a]).unwrap(),
        &[0.0],
        &CostKernel::Monotone(qig_core::StandardFunction::KuboMori),
    )
    .unwrap();
    let quad_ok = res[(0, 0)].abs() < 1e-6;

    report(
        "08 cramer-rao",
        r.pass && quad_ok,
        &format!(
            "worst residual min-eigenvalue {:.3e} over 200 models; {}; \
             km equality with quadrature normalizer residual {:.3e}",
            r.worst_gap,
            r.details.join("; "),
            res[(0, 0)]
        ),
    );
}

#[test]
fn criterion_09_exponential_family_ode() {
    let r = run_exp_ode(&cfg(3, 1e-12)).unwrap();
    report(
        "09 exponential-family ode",
        r.pass,
        &format!(
            "worst margin {:.3} of allowance; {}",
            r.worst_gap,
            r.details.join("; ")
        ),
    );
}

#[test]
fn criterion_10_fisher_matrix_monotonicity() {
    let r = run_fisher_matrix(&cfg(200, 1e-9)).unwrap();
    report(
        "10 fisher-matrix monotonicity + measurement reduction",
        r.pass,
        &format!("worst normalized gap {:.3e} over 200 trials", r.worst_gap),
    );
}

#[test]
fn criterion_11_determinant_uncertainty() {
    let r = run_uncertainty(&cfg(500, 1e-10)).unwrap();
    report(
        "11 determinant uncertainty",
        r.pass,
        &format!(
            "worst normalized residual {:.3e} over 500 trials; {}",
            r.worst_gap,
            r.details.join("; ")
        ),
    );
}

#[test]
fn criterion_12_determinism() {
    let r = run_determinism(&cfg(50, 1e-12)).unwrap();
    report(
        "12 determinism across --jobs",
        r.pass,
        &r.details.join("; "),
    );
}
