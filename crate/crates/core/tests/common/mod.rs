#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use oam_cs::state::{DensityMatrix, KrausMatrix, StateVector};

pub fn gaussian_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_state<R: Rng>(dim: usize, rng: &mut R) -> StateVector {
    StateVector::normalized(DVector::from_fn(dim, |_, _| gaussian_complex(rng))).unwrap()
}

/// Hermitian matrix with Gaussian entries (not trace-normalised).
pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    (&a + a.adjoint()).scale(0.5)
}

/// Random mixed state of the given rank.
pub fn random_density<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let a = DMatrix::from_fn(dim, rank, |_, _| gaussian_complex(rng));
    let m = &a * a.adjoint();
    let t = m.trace().re;
    DensityMatrix::new(m.unscale(t)).unwrap()
}

/// `rows × cols` matrix with orthonormal columns (Gram-Schmidt of a Gaussian draw).
pub fn random_isometry<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> KrausMatrix {
    let mut m = DMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng));
    for c in 0..cols {
        for prev in 0..c {
            let proj = m.column(prev).dotc(&m.column(c));
            let p = m.column(prev).into_owned();
            m.column_mut(c).axpy(-proj, &p, Complex64::new(1.0, 0.0));
        }
        let n = m.column(c).norm();
        m.column_mut(c).unscale_mut(n);
    }
    KrausMatrix::new(m)
}

/// Haar-ish random unitary from the QR-free isometry above.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    random_isometry(dim, dim, rng).entries().clone()
}

/// Choi vector `(m, k) → V[m, k] / √3` of an `N × 3` isometry, normalised.
pub fn choi_of(v: &KrausMatrix) -> StateVector {
    StateVector::normalized(oam_cs::channel::choi_vector(v)).unwrap()
}
