//! State vectors, density matrices and Kraus matrices over the truncated
//! mode ⊗ wavelength space. The flat index of (mode `m`, wavelength `n`) is
//! `m · N_B + n`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    entries: DVector<Complex64>,
}

impl StateVector {
    pub fn new(entries: DVector<Complex64>) -> Self {
        Self { entries }
    }

    pub fn from_vec(entries: Vec<Complex64>) -> Self {
        Self::new(DVector::from_vec(entries))
    }

    /// Copy scaled to unit norm. Fails on the zero vector.
    pub fn normalized(entries: DVector<Complex64>) -> Result<Self> {
        let norm = entries.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidParameter("cannot normalise a zero vector".into()));
        }
        Ok(Self::new(entries.unscale(norm)))
    }

    /// Basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &DVector<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DVector<Complex64> {
        self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.entries.dotc(&other.entries)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(&self.entries * self.entries.adjoint())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        Ok(Self { entries })
    }

    pub(crate) fn new_unchecked(entries: DMatrix<Complex64>) -> Self {
        debug_assert!(entries.is_square());
        Self { entries }
    }

    /// `I / d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let mut m = DMatrix::identity(dim, dim);
        m.unscale_mut(dim as f64);
        Self::new_unchecked(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `tr(ρ²)`, assuming Hermitian input.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `(ρ + ρ†) / 2`.
    pub fn hermitized(&self) -> Self {
        let h = (&self.entries + self.entries.adjoint()).scale(0.5);
        Self::new_unchecked(h)
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).camax()
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.hermitized().entries)
    }

    /// Expectation `⟨ψ|ρ|ψ⟩` (real part).
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(psi.entries.dotc(&(&self.entries * &psi.entries)).re)
    }

    /// Frobenius distance to another matrix of the same size.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        (&self.entries - &other.entries).norm()
    }
}

/// Rectangular channel matrix `Λ` mapping `N` input modes to `M` output modes.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMatrix {
    entries: DMatrix<Complex64>,
}

impl KrausMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Self {
        Self { entries }
    }

    /// Isometric embedding that sends input column `k` to output row `rows_for_inputs[k]`.
    pub fn embedding(rows: usize, rows_for_inputs: &[usize]) -> Self {
        let mut m = DMatrix::zeros(rows, rows_for_inputs.len());
        for (k, &r) in rows_for_inputs.iter().enumerate() {
            m[(r, k)] = Complex64::new(1.0, 0.0);
        }
        Self::new(m)
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn column_norms(&self) -> Vec<f64> {
        self.entries.column_iter().map(|c| c.norm()).collect()
    }

    /// `max |(Λ†Λ − I)_ij|`.
    pub fn isometry_defect(&self) -> f64 {
        let g = self.entries.adjoint() * &self.entries;
        (g - DMatrix::identity(self.cols(), self.cols())).camax()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_density_is_rank_one() {
        let psi = StateVector::normalized(DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(-1.0, 1.0),
        ]))
        .unwrap();
        let rho = psi.density();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!(rho.hermiticity_error() < 1e-15);
        let ev = rho.eigenvalues();
        assert!((ev[2] - 1.0).abs() < 1e-12 && ev[1].abs() < 1e-12);
        assert!((rho.expectation(&psi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embedding_is_isometric() {
        let k = KrausMatrix::embedding(10, &[2, 5, 7]);
        assert!(k.isometry_defect() < 1e-15);
        assert_eq!(k.column_norms(), vec![1.0; 3]);
    }

    #[test]
    fn maximally_mixed_trace() {
        let r = DensityMatrix::maximally_mixed(7);
        assert!((r.trace() - 1.0).abs() < 1e-15);
        assert!((r.purity() - 1.0 / 7.0).abs() < 1e-15);
    }
}
