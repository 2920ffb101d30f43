//! Hermitian spectral calculus: validated matrix types, eigendecompositions,
//! matrix functions, trace norms and seeded random generation.
//!
//! Conventions: eigenvalues are returned ascending; random Hermitian
//! matrices are GUE-style (standard normal real/imaginary parts,
//! symmetrized); Haar unitaries come from QR of a complex Gaussian with
//! the R-diagonal phase fixed.

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

/// Absolute tolerance for the Hermiticity check.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Absolute tolerance on `trace = 1` for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Default eigenvalue floor for "invertible density matrix" contexts.
pub const DEFAULT_FLOOR: f64 = 1e-8;
/// Floor enforced by [`random_density`]; keeps kernels well conditioned.
pub const RANDOM_DENSITY_FLOOR: f64 = 1e-6;

/// A square complex matrix checked to be Hermitian within [`HERMITICITY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    mat: CMat,
}

impl HermitianMatrix {
    /// Validate and wrap `mat`. Fails on non-square input or when the
    /// maximal asymmetry `|m[i][j] - conj(m[j][i])|` exceeds the tolerance.
    pub fn new(mat: CMat) -> Result<Self> {
        let (r, c) = mat.shape();
        if r != c {
            return Err(Error::NotSquare { rows: r, cols: c });
        }
        let mut worst = 0.0f64;
        for i in 0..r {
            for j in i..r {
                let d = mat[(i, j)] - mat[(j, i)].conj();
                worst = worst.max(d.norm());
                if !mat[(i, j)].re.is_finite() || !mat[(i, j)].im.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "non-finite entry at ({i},{j})"
                    )));
                }
            }
        }
        if worst > HERMITICITY_TOL {
            return Err(Error::NotHermitian(worst));
        }
        Ok(Self { mat })
    }

    /// Wrap `(m + m*)/2`, discarding the anti-Hermitian part. Used after
    /// arithmetic that is Hermitian in exact arithmetic but not in floats.
    pub fn symmetrized(mat: &CMat) -> Self {
        let sym = (mat + mat.adjoint()).scale(0.5);
        Self { mat: sym }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMat::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Self { mat: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMat::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: CMat::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    /// Real trace (the imaginary part of a Hermitian trace is zero).
    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }
}

/// Result of diagonalizing a Hermitian matrix: `basis * diag(eigenvalues) * basis*`
/// reconstructs the input; eigenvalue order is ascending.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    basis: CMat,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary whose columns are eigenvectors, ordered like the eigenvalues.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `basis * diag(f(eigenvalues)) * basis*`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.dim();
        let mut scaled = self.basis.clone();
        for j in 0..n {
            let fj = C64::new(f(self.eigenvalues[j]), 0.0);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        &scaled * self.basis.adjoint()
    }

    pub fn reconstruct(&self) -> CMat {
        self.apply_fn(|x| x)
    }

    /// Conjugate `a` into the eigenbasis: `basis* a basis`.
    pub fn to_eigenbasis(&self, a: &CMat) -> CMat {
        self.basis.adjoint() * a * &self.basis
    }

    /// Conjugate back from the eigenbasis: `basis a basis*`.
    pub fn from_eigenbasis(&self, a: &CMat) -> CMat {
        &self.basis * a * self.basis.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn spectral_decompose(h: &HermitianMatrix) -> SpectralDecomposition {
    spectral_decompose_raw(h.mat())
}

pub(crate) fn spectral_decompose_raw(m: &CMat) -> SpectralDecomposition {
    let se = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut basis = CMat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        basis.set_column(col, &se.eigenvectors.column(k));
    }
    SpectralDecomposition { eigenvalues, basis }
}

/// `U diag(f(λ)) U*` for the spectral decomposition of `h`. Fails when
/// `f` is undefined (non-finite) at some eigenvalue.
pub fn matrix_function(h: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let sd = spectral_decompose(h);
    for &ev in sd.eigenvalues() {
        let v = f(ev);
        if !v.is_finite() {
            return Err(Error::Domain {
                name: "matrix function".into(),
                point: ev,
            });
        }
    }
    Ok(HermitianMatrix::symmetrized(&sd.apply_fn(f)))
}

/// Sum of absolute eigenvalues (Schatten-1 norm of a Hermitian matrix).
pub fn trace_norm(h: &HermitianMatrix) -> f64 {
    spectral_decompose(h)
        .eigenvalues()
        .iter()
        .map(|x| x.abs())
        .sum()
}

/// A Hermitian matrix with unit trace whose eigenvalues all sit at or
/// above the validation floor, i.e. an invertible state.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    h: HermitianMatrix,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn mat(&self) -> &CMat {
        self.h.mat()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.h
    }

    pub fn spectral(&self) -> SpectralDecomposition {
        spectral_decompose(&self.h)
    }
}

/// Accept `m` as a density matrix: trace within [`TRACE_TOL`] of 1 and
/// minimal eigenvalue at least `floor`.
pub fn validate_density(m: HermitianMatrix, floor: f64) -> Result<DensityMatrix> {
    let tr = m.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::Trace(tr));
    }
    let min = spectral_decompose(&m).min_eigenvalue();
    if min < floor {
        return Err(Error::Positivity { found: min, floor });
    }
    Ok(DensityMatrix { h: m })
}

/// Complex matrix with independent standard normal real/imaginary parts,
/// scaled so entries have unit variance.
pub fn random_complex_gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * inv_sqrt2, im * inv_sqrt2)
    })
}

/// GUE-style random Hermitian matrix.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let g = random_complex_gaussian(dim, dim, rng);
    HermitianMatrix::symmetrized(&g)
}

/// Random Hermitian with the trace projected out.
pub fn random_traceless_hermitian(dim: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let h = random_hermitian(dim, rng);
    let shift = h.trace() / dim as f64;
    let mut m = h.into_matrix();
    for i in 0..dim {
        m[(i, i)] -= C64::new(shift, 0.0);
    }
    HermitianMatrix::symmetrized(&m)
}

/// Haar-distributed unitary: QR of a complex Gaussian, with each column
/// rescaled by the phase of the corresponding R-diagonal entry.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMat {
    random_isometry(dim, dim, rng)
}

/// First `cols` columns of a Haar unitary on `rows` dimensions (`cols <= rows`).
pub fn random_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    assert!(cols <= rows);
    let g = random_complex_gaussian(rows, cols, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / C64::new(d.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random invertible density from a Wishart-type construction
/// `G G* / Tr(G G*)`, floored by mixing with the maximally mixed state
/// when the smallest eigenvalue falls below [`RANDOM_DENSITY_FLOOR`].
/// Identical seeds produce bit-identical matrices.
pub fn random_density(dim: usize, seed_value: u64) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut rng = seed::rng_from(seed_value);
    Ok(random_density_rng(dim, RANDOM_DENSITY_FLOOR, &mut rng))
}

/// Rng-driven variant of [`random_density`] with an explicit floor.
pub fn random_density_rng(dim: usize, floor: f64, rng: &mut impl Rng) -> DensityMatrix {
    let g = random_complex_gaussian(dim, dim, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    let mut rho = HermitianMatrix::symmetrized(&w.scale(1.0 / tr));
    let min = spectral_decompose(&rho).min_eigenvalue();
    if min < floor {
        rho = mix_with_identity(&rho, min, floor);
    }
    DensityMatrix { h: rho }
}

/// Mix `rho` with I/n so the smallest eigenvalue lands exactly on `floor`.
pub(crate) fn mix_with_identity(rho: &HermitianMatrix, min: f64, floor: f64) -> HermitianMatrix {
    let n = rho.dim() as f64;
    debug_assert!(floor < 1.0 / n);
    let w = (floor - min) / (1.0 / n - min);
    let mut m = rho.mat().scale(1.0 - w);
    for i in 0..rho.dim() {
        m[(i, i)] += C64::new(w / n, 0.0);
    }
    HermitianMatrix::symmetrized(&m)
}

// ---------------------------------------------------------------------------
// Pauli fixtures (used by tests and the fixture suite)
// ---------------------------------------------------------------------------

pub fn pauli_x() -> HermitianMatrix {
    HermitianMatrix::new(CMat::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ],
    ))
    .expect("pauli x")
}

pub fn pauli_y() -> HermitianMatrix {
    HermitianMatrix::new(CMat::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    ))
    .expect("pauli y")
}

pub fn pauli_z() -> HermitianMatrix {
    HermitianMatrix::from_real_diagonal(&[1.0, -1.0])
}

// ---------------------------------------------------------------------------
// Matrix file format
// ---------------------------------------------------------------------------

/// On-disk matrix document: `dim`, plus row-major `re` and `im` arrays.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMat) -> Self {
        let n = m.nrows();
        let grab = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        MatrixFile {
            dim: n,
            re: grab(|z| z.re),
            im: grab(|z| z.im),
        }
    }

    /// Rebuild the complex matrix, rejecting non-square or mismatched arrays.
    pub fn to_matrix(&self) -> Result<CMat> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        for (name, rows) in [("re", &self.re), ("im", &self.im)] {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Parse(format!(
                    "`{name}` must be a {n}x{n} array matching `dim`"
                )));
            }
        }
        Ok(CMat::from_fn(n, n, |i, j| {
            C64::new(self.re[i][j], self.im[i][j])
        }))
    }

    pub fn parse(text: &str) -> Result<CMat> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_matrix()
    }

    pub fn render(m: &CMat) -> String {
        serde_json::to_string_pretty(&Self::from_matrix(m)).expect("matrix file serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diff(a: &CMat, b: &CMat) -> f64 {
        (a - b).norm()
    }

    #[test]
    fn pauli_x_spectrum() {
        let sd = spectral_decompose(&pauli_x());
        assert_abs_diff_eq!(sd.eigenvalues()[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sd.eigenvalues()[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_spectrum_is_sorted_identity_basis() {
        let h = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let sd = spectral_decompose(&h);
        assert_eq!(sd.eigenvalues(), &[1.0, 2.0, 3.0]);
        // identity basis up to phases
        for j in 0..3 {
            let col = sd.basis().column(j);
            assert_abs_diff_eq!(col[j].norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = seed::rng_from(11);
        let h = random_hermitian(4, &mut rng);
        let sd = spectral_decompose(&h);
        let rel = diff(&sd.reconstruct(), h.mat()) / h.frobenius_norm();
        assert!(rel < 1e-10, "reconstruction error {rel}");
        let unit = (sd.basis().adjoint() * sd.basis() - CMat::identity(4, 4)).norm();
        assert!(unit < 1e-12, "basis not unitary: {unit}");
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn matrix_function_square_of_pauli_x_is_identity() {
        let sq = matrix_function(&pauli_x(), |x| x * x).unwrap();
        assert!(diff(sq.mat(), &CMat::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn matrix_function_log_of_diagonal() {
        let h = HermitianMatrix::from_real_diagonal(&[std::f64::consts::E, (2f64).exp()]);
        let l = matrix_function(&h, f64::ln).unwrap();
        assert_abs_diff_eq!(l.mat()[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l.mat()[(1, 1)].re, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn matrix_function_exp_log_roundtrip() {
        let mut rng = seed::rng_from(5);
        let h = random_hermitian(3, &mut rng);
        let back = matrix_function(&matrix_function(&h, f64::exp).unwrap(), f64::ln).unwrap();
        assert!(diff(back.mat(), h.mat()) < 1e-10);
    }

    #[test]
    fn matrix_function_log_domain_error() {
        let h = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(matches!(
            matrix_function(&h, f64::ln),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn matrix_function_matches_explicit_polynomial() {
        // p(x) = 2x^3 - x + 0.5 on seeded random Hermitians
        for trial in 0..20 {
            let mut rng = seed::trial_rng(101, trial);
            let h = random_hermitian(4, &mut rng);
            let m = h.mat();
            let p = matrix_function(&h, |x| 2.0 * x * x * x - x + 0.5).unwrap();
            let direct = (m * m * m).scale(2.0) - m + CMat::identity(4, 4).scale(0.5);
            let rel = diff(p.mat(), &direct) / direct.norm();
            assert!(rel < 1e-10, "trial {trial}: relative error {rel}");
        }
    }

    #[test]
    fn trace_norm_examples() {
        assert_abs_diff_eq!(
            trace_norm(&HermitianMatrix::from_real_diagonal(&[1.0, -2.0])),
            3.0,
            epsilon = 1e-12
        );
        let d = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert_abs_diff_eq!(trace_norm(&d), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_norm_matches_spectral_sum_and_triangle_inequality() {
        for trial in 0..100u64 {
            let mut rng = seed::trial_rng(77, trial);
            let a = random_hermitian(3, &mut rng);
            let b = random_hermitian(3, &mut rng);
            let spectral_sum: f64 = spectral_decompose(&a)
                .eigenvalues()
                .iter()
                .map(|x| x.abs())
                .sum();
            assert_abs_diff_eq!(trace_norm(&a), spectral_sum, epsilon = 1e-10);
            let sum = HermitianMatrix::symmetrized(&(a.mat() + b.mat()));
            assert!(trace_norm(&sum) <= trace_norm(&a) + trace_norm(&b) + 1e-10);
        }
    }

    #[test]
    fn validate_density_examples() {
        let ok = validate_density(
            HermitianMatrix::from_real_diagonal(&[0.5, 0.5]),
            DEFAULT_FLOOR,
        );
        assert!(ok.is_ok());
        let trace_err = validate_density(
            HermitianMatrix::from_real_diagonal(&[0.7, 0.4]),
            DEFAULT_FLOOR,
        );
        assert!(matches!(trace_err, Err(Error::Trace(_))));
        let pos_err = validate_density(
            HermitianMatrix::from_real_diagonal(&[1.2, -0.2]),
            DEFAULT_FLOOR,
        );
        assert!(matches!(pos_err, Err(Error::Positivity { .. })));
    }

    #[test]
    fn random_density_contract() {
        let rho = random_density(2, 42).unwrap();
        assert!(validate_density(rho.hermitian().clone(), 1e-6).is_ok());
        let again = random_density(2, 42).unwrap();
        assert_eq!(rho.mat(), again.mat());
        let other = random_density(2, 1).unwrap();
        assert!(diff(rho.mat(), other.mat()) > 0.0);
        assert!(random_density(0, 42).is_err());
    }

    #[test]
    fn density_eigenvalues_sum_to_one() {
        for trial in 0..20u64 {
            let rho = random_density(4, trial).unwrap();
            let s: f64 = rho.spectral().eigenvalues().iter().sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn isometry_columns_orthonormal() {
        let mut rng = seed::rng_from(3);
        let v = random_isometry(6, 2, &mut rng);
        let g = v.adjoint() * &v;
        assert!(diff(&g, &CMat::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn matrix_file_roundtrip_and_rejection() {
        let mut rng = seed::rng_from(9);
        let m = random_complex_gaussian(3, 3, &mut rng);
        let text = MatrixFile::render(&m);
        let back = MatrixFile::parse(&text).unwrap();
        assert!(diff(&back, &m) < 1e-15);

        let bad = r#"{"dim": 2, "re": [[1, 0, 0], [0, 1, 0]], "im": [[0, 0], [0, 0]]}"#;
        assert!(matches!(MatrixFile::parse(bad), Err(Error::Parse(_))));
    }
}
