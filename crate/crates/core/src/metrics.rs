//! Fidelity, trace distance and negativity against a pure target.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;
use crate::state::{DensityMatrix, StateVector};

fn check(rho: &DensityMatrix, target: &StateVector) -> Result<()> {
    if rho.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: target.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// `√⟨Ψ|ρ|Ψ⟩`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    check(rho, target)?;
    Ok(rho.expectation(target)?.clamp(0.0, 1.0).sqrt())
}

/// `½ Σ |eig(ρ − |Ψ⟩⟨Ψ|)|`.
pub fn trace_distance(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    check(rho, target)?;
    let diff = rho.hermitized().into_entries() - target.density().into_entries();
    let sum: f64 = linalg::hermitian_eigenvalues(&diff).iter().map(|v| v.abs()).sum();
    Ok(0.5 * sum)
}

/// Partial transpose over subsystem B: `(a b, a' b') → (a b', a' b)`.
pub fn partial_transpose_b(rho: &DensityMatrix, dim_a: usize, dim_b: usize) -> Result<DensityMatrix> {
    if dim_a * dim_b != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            found: rho.dim(),
        });
    }
    let m = rho.entries();
    let pt = DMatrix::from_fn(rho.dim(), rho.dim(), |r, c| {
        let (a, b) = (r / dim_b, r % dim_b);
        let (a2, b2) = (c / dim_b, c % dim_b);
        m[(a * dim_b + b2, a2 * dim_b + b)]
    });
    DensityMatrix::new(pt)
}

/// `½ Σ (|λ| − λ)` over the eigenvalues of the partial transpose.
pub fn negativity(rho: &DensityMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    let pt = partial_transpose_b(&rho.hermitized(), dim_a, dim_b)?;
    Ok(0.5 * pt.eigenvalues().iter().map(|l| l.abs() - l).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{build_input_state, InputStateSpec};

    #[test]
    fn textbook_values() {
        let psi = build_input_state(&InputStateSpec::default()).unwrap();
        let rho = psi.density();
        assert!((fidelity(&rho, &psi).unwrap() - 1.0).abs() < 1e-12);
        assert!(trace_distance(&rho, &psi).unwrap() < 1e-12);
        assert!((negativity(&rho, 3, 3).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(9);
        assert!((fidelity(&mixed, &psi).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!(negativity(&mixed, 3, 3).unwrap().abs() < 1e-12);
        let orth = StateVector::basis(9, 1);
        assert!(fidelity(&orth.density(), &psi).unwrap() < 1e-12);
        assert!((trace_distance(&orth.density(), &StateVector::basis(9, 2)).unwrap() - 1.0).abs() < 1e-12);
        assert!(negativity(&StateVector::basis(9, 0).density(), 3, 3).unwrap().abs() < 1e-12);
        assert!(negativity(&rho, 2, 3).is_err());
        assert!(fidelity(&rho, &StateVector::basis(4, 0)).is_err());
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let psi = build_input_state(&InputStateSpec::default()).unwrap();
        let rho = psi.density();
        let once = partial_transpose_b(&rho, 3, 3).unwrap();
        let twice = partial_transpose_b(&once, 3, 3).unwrap();
        assert_eq!(twice, rho);
        let ev = once.eigenvalues();
        assert!((ev[0] + 1.0 / 3.0).abs() < 1e-12);
        assert!((ev[8] - 1.0 / 3.0).abs() < 1e-12);
    }
}
