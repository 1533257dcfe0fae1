//! Dense Hermitian eigensolver shim.
//!
//! Matrices are held as `nalgebra` values throughout the crate; the
//! decomposition itself is delegated to `faer`, which is several times faster
//! on the 100–600 dimensional problems the tomography loop produces.

use faer::complex_native::c64;
use faer::{Mat, Side};
use nalgebra::DMatrix;
use num_complex::Complex64;

fn to_faer(m: &DMatrix<Complex64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        c64::new(z.re, z.im)
    })
}

/// Eigenvalues (ascending) and column eigenvectors of a Hermitian matrix.
/// Only the lower triangle is read.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    assert!(m.is_square(), "eigendecomposition of a non-square matrix");
    let n = m.nrows();
    let evd = to_faer(m).selfadjoint_eigendecomposition(Side::Lower);
    let s = evd.s().column_vector();
    let values = (0..n).map(|i| s.read(i).re).collect();
    let u = evd.u();
    let vectors = DMatrix::from_fn(n, n, |i, j| {
        let z = u.read(i, j);
        Complex64::new(z.re, z.im)
    });
    (values, vectors)
}

/// Eigenvalues (ascending) of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    assert!(m.is_square(), "eigenvalues of a non-square matrix");
    let mut values = to_faer(m).selfadjoint_eigenvalues(Side::Lower);
    values.sort_by(f64::total_cmp);
    values
}
