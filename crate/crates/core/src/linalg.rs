//! Dense complex linear algebra for small systems.
//!
//! Vectors and matrices are plain [`nalgebra`] dynamic types over
//! [`Complex64`]; this module adds the matrix-analytic quantities the rest of
//! the crate needs: trace splitting, Hilbert-Schmidt and spectral norms,
//! singular values, numerical rank and closed-form two-level spectra.
//!
//! Bra-ket conventions: `inner(a, b)` is `⟨a|b⟩` (antilinear in `a`) and
//! `outer(a, b)` is `|a⟩⟨b|`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 64;

/// Default relative threshold for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const SVD_MAX_ITER: usize = 10_000;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Build a vector from its entries.
pub fn cvec(entries: &[C64]) -> CVector {
    CVector::from_column_slice(entries)
}

/// Build a square matrix from row-major rows.
///
/// Panics if the rows are ragged or not square; intended for literals.
pub fn cmat<const N: usize>(rows: [[C64; N]; N]) -> CMatrix {
    CMatrix::from_fn(N, N, |i, j| rows[i][j])
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn sigma_x() -> CMatrix {
    cmat([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn sigma_y() -> CMatrix {
    cmat([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn sigma_z() -> CMatrix {
    cmat([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
}

/// `⟨a|b⟩`.
pub fn inner(a: &CVector, b: &CVector) -> C64 {
    a.dotc(b)
}

/// `|a⟩⟨b|`.
pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

pub fn vector_norm(v: &CVector) -> f64 {
    v.norm()
}

pub fn is_finite_vector(v: &CVector) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn is_finite_matrix(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Conjugate transpose.
pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Split `h` into its traceless part and the mean eigenvalue `tr(h)/N`.
pub fn trace_split(h: &CMatrix) -> (CMatrix, C64) {
    let n = h.nrows();
    let mu = h.trace() / n as f64;
    let mut traceless = h.clone();
    for i in 0..n {
        traceless[(i, i)] -= mu;
    }
    (traceless, mu)
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖M − M†‖_HS`.
pub fn anti_hermitian_residual(m: &CMatrix) -> f64 {
    hs_norm(&(m - m.adjoint()))
}

/// Hermitian within `rel_tol · ‖M‖_HS`.
pub fn is_hermitian(m: &CMatrix, rel_tol: f64) -> bool {
    anti_hermitian_residual(m) <= rel_tol * hs_norm(m)
}

/// Singular values, sorted nonincreasing.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    let n = ensure_square(m)?;
    if n > MAX_DIM {
        return Err(Error::TooLarge(n));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let svd = m
        .clone()
        .try_svd(false, false, f64::EPSILON, SVD_MAX_ITER)
        .ok_or(Error::ConvergenceFailure)?;
    let mut values: Vec<f64> = svd.singular_values.iter().map(|s| s.max(0.0)).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Number of singular values above `tol · σ_max`.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> Result<usize> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!("rank tolerance {tol} must be nonnegative")));
    }
    let sv = singular_values(m)?;
    let Some(&top) = sv.first() else {
        return Ok(0);
    };
    Ok(sv.iter().filter(|&&s| s > tol * top).count())
}

/// Eigenvalues of a 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelSpectrum {
    pub e_plus: C64,
    pub e_minus: C64,
    pub delta_e: C64,
}

/// Closed-form roots of the characteristic polynomial of a 2×2 matrix.
///
/// `e_plus` takes the principal square root of the discriminant, so for a
/// traceless matrix `e_plus = √(−det M)` and `e_minus = −e_plus`.
pub fn eigenvalues_2x2(m: &CMatrix) -> Result<TwoLevelSpectrum> {
    let n = ensure_square(m)?;
    ensure_dim(2, n)?;
    let (a, b, cc, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let mean = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let root = (half_diff * half_diff + b * cc).sqrt();
    Ok(TwoLevelSpectrum {
        e_plus: mean + root,
        e_minus: mean - root,
        delta_e: root * 2.0,
    })
}

/// `(α⃗ + iβ⃗)·σ⃗`.
pub fn pauli_combination(alpha: [f64; 3], beta: [f64; 3]) -> CMatrix {
    let coef = |k: usize| c(alpha[k], beta[k]);
    sigma_x() * coef(0) + sigma_y() * coef(1) + sigma_z() * coef(2)
}
