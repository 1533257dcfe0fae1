use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, StateVector};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// One generalised Gell-Mann matrix, described by its non-zero pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgmElement {
    /// `I / √d`.
    Identity,
    /// `(E_jk + E_kj) / √2`, `j < k`.
    Symmetric { j: usize, k: usize },
    /// `−i (E_jk − E_kj) / √2`, `j < k`.
    Antisymmetric { j: usize, k: usize },
    /// `(Σ_{j<l} E_jj − l E_ll) / √(l (l + 1))`, `1 ≤ l < d`.
    Diagonal { l: usize },
}

/// Trace-orthonormal generalised Gell-Mann basis of `d × d` Hermitian matrices.
///
/// Elements are never stored densely. Index 0 is the scaled identity, then
/// all symmetric pairs `(j, k)` in row-major order, then the antisymmetric
/// pairs in the same order, then the `d − 1` diagonal elements.
#[derive(Debug, Clone, PartialEq)]
pub struct GgmBasis {
    dim: usize,
    pairs: Vec<(usize, usize)>,
}

impl GgmBasis {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("GGM dimension {dim} must be at least 2")));
        }
        let pairs = (0..dim).flat_map(|j| (j + 1..dim).map(move |k| (j, k))).collect();
        Ok(Self { dim, pairs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `d²`.
    pub fn len(&self) -> usize {
        self.dim * self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, index: usize) -> GgmElement {
        assert!(index < self.len(), "GGM index {index} out of range for d = {}", self.dim);
        let np = self.pairs.len();
        match index {
            0 => GgmElement::Identity,
            i if i <= np => {
                let (j, k) = self.pairs[i - 1];
                GgmElement::Symmetric { j, k }
            }
            i if i <= 2 * np => {
                let (j, k) = self.pairs[i - 1 - np];
                GgmElement::Antisymmetric { j, k }
            }
            i => GgmElement::Diagonal { l: i - 2 * np },
        }
    }

    fn diagonal_norm(l: usize) -> f64 {
        ((l * (l + 1)) as f64).sqrt().recip()
    }

    /// Dense copy of element `index`.
    pub fn matrix(&self, index: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        self.add_scaled_to(index, 1.0, &mut m);
        m
    }

    /// `tr(τ_i ρ)`, real part.
    pub fn expectation(&self, index: usize, rho: &DMatrix<Complex64>) -> f64 {
        match self.element(index) {
            GgmElement::Identity => rho.trace().re / (self.dim as f64).sqrt(),
            GgmElement::Symmetric { j, k } => (rho[(j, k)] + rho[(k, j)]).re * FRAC_1_SQRT_2,
            GgmElement::Antisymmetric { j, k } => (rho[(k, j)] - rho[(j, k)]).im * FRAC_1_SQRT_2,
            GgmElement::Diagonal { l } => {
                let head: f64 = (0..l).map(|j| rho[(j, j)].re).sum();
                (head - l as f64 * rho[(l, l)].re) * Self::diagonal_norm(l)
            }
        }
    }

    /// `⟨ψ|τ_i|ψ⟩`.
    pub fn expectation_state(&self, index: usize, psi: &StateVector) -> f64 {
        let v = psi.entries();
        match self.element(index) {
            GgmElement::Identity => v.norm_squared() / (self.dim as f64).sqrt(),
            GgmElement::Symmetric { j, k } => 2.0 * (v[j].conj() * v[k]).re * FRAC_1_SQRT_2,
            GgmElement::Antisymmetric { j, k } => 2.0 * (v[j].conj() * v[k]).im * FRAC_1_SQRT_2,
            GgmElement::Diagonal { l } => {
                let head: f64 = (0..l).map(|j| v[j].norm_sqr()).sum();
                (head - l as f64 * v[l].norm_sqr()) * Self::diagonal_norm(l)
            }
        }
    }

    /// `m ← m + c τ_i`.
    pub fn add_scaled_to(&self, index: usize, c: f64, m: &mut DMatrix<Complex64>) {
        match self.element(index) {
            GgmElement::Identity => {
                let s = c / (self.dim as f64).sqrt();
                for i in 0..self.dim {
                    m[(i, i)].re += s;
                }
            }
            GgmElement::Symmetric { j, k } => {
                let s = c * FRAC_1_SQRT_2;
                m[(j, k)].re += s;
                m[(k, j)].re += s;
            }
            GgmElement::Antisymmetric { j, k } => {
                let s = c * FRAC_1_SQRT_2;
                m[(j, k)].im -= s;
                m[(k, j)].im += s;
            }
            GgmElement::Diagonal { l } => {
                let s = c * Self::diagonal_norm(l);
                for j in 0..l {
                    m[(j, j)].re += s;
                }
                m[(l, l)].re -= l as f64 * s;
            }
        }
    }

    /// Bloch coefficients `tr(τ_i ρ)` for every element.
    pub fn coefficients(&self, rho: &DensityMatrix) -> Vec<f64> {
        (0..self.len()).map(|i| self.expectation(i, rho.entries())).collect()
    }

    /// `Σ_i c_i τ_i`.
    pub fn synthesize(&self, coefficients: &[f64]) -> Result<DensityMatrix> {
        if coefficients.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: coefficients.len(),
            });
        }
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, &c) in coefficients.iter().enumerate() {
            self.add_scaled_to(i, c, &mut m);
        }
        DensityMatrix::new(m)
    }
}

/// Convenience constructor matching [`GgmBasis::new`].
pub fn ggm_basis(dim: usize) -> Result<GgmBasis> {
    GgmBasis::new(dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_basis_is_scaled_pauli() {
        let b = ggm_basis(2).unwrap();
        assert_eq!(b.len(), 4);
        let s = FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re * s, im * s);
        let want = [
            [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
            [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        ];
        for (i, w) in want.iter().enumerate() {
            let m = b.matrix(i);
            let got = [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]];
            for (g, e) in got.iter().zip(w) {
                assert!((g - e).norm() < 1e-15, "element {i}");
            }
        }
    }

    #[test]
    fn ordering() {
        let b = ggm_basis(3).unwrap();
        assert_eq!(b.element(0), GgmElement::Identity);
        assert_eq!(b.element(1), GgmElement::Symmetric { j: 0, k: 1 });
        assert_eq!(b.element(3), GgmElement::Symmetric { j: 1, k: 2 });
        assert_eq!(b.element(4), GgmElement::Antisymmetric { j: 0, k: 1 });
        assert_eq!(b.element(7), GgmElement::Diagonal { l: 1 });
        assert_eq!(b.element(8), GgmElement::Diagonal { l: 2 });
        assert!(ggm_basis(1).is_err());
    }

    #[test]
    fn implicit_expectations_match_dense_traces() {
        let b = ggm_basis(4).unwrap();
        let a = DMatrix::from_fn(4, 4, |i, j| Complex64::new((i * 4 + j) as f64 * 0.3 - 1.0, (i as f64) - 0.5 * j as f64));
        let h = (&a + a.adjoint()).scale(0.5);
        let psi = StateVector::from_vec((0..4).map(|i| Complex64::new(i as f64 - 1.2, 0.7 * i as f64)).collect());
        for i in 0..b.len() {
            let t = b.matrix(i);
            let want = (&t * &h).trace().re;
            assert!((b.expectation(i, &h) - want).abs() < 1e-12);
            let want = psi.entries().dotc(&(&t * psi.entries())).re;
            assert!((b.expectation_state(i, &psi) - want).abs() < 1e-12);
        }
    }
}
