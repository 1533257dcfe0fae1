//! Channel inversion: recover a pure output state from a reconstructed density
//! matrix, rearrange it into the Kraus matrix and apply its adjoint.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::metrics::{fidelity, negativity, trace_distance};
use crate::state::{DensityMatrix, KrausMatrix, StateVector};

/// Largest second eigenvalue accepted by [`extract_state_vector`] by default.
pub const DEFAULT_RANK_THRESHOLD: f64 = 0.1;
const MIN_PIVOT: f64 = 1e-10;
const MIN_COLUMN_NORM: f64 = 1e-6;
const MIN_TRACE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtractionMethod {
    /// Column of the largest diagonal entry, divided by the square root of that entry.
    #[default]
    ColumnDivision,
    DominantEigenvector,
}

/// Pure state underlying a near rank-1 density matrix. The entry at the
/// largest diagonal position is made real and positive.
pub fn extract_state_vector(rho: &DensityMatrix, method: ExtractionMethod, rank_threshold: f64) -> Result<StateVector> {
    let h = rho.hermitized();
    let (values, vectors) = linalg::hermitian_eigen(h.entries());
    let d = values.len();
    if d >= 2 && values[d - 2] >= rank_threshold {
        return Err(Error::RankAmbiguous {
            second: values[d - 2],
            threshold: rank_threshold,
        });
    }
    let m = h.entries();
    let (pivot, diag) = (0..d)
        .map(|i| (i, m[(i, i)].re))
        .fold((0, f64::NEG_INFINITY), |best, x| if x.1 > best.1 { x } else { best });
    if diag < MIN_PIVOT {
        return Err(Error::ZeroPivot(diag));
    }
    let raw: DVector<Complex64> = match method {
        ExtractionMethod::ColumnDivision => m.column(pivot).unscale(diag.sqrt()),
        ExtractionMethod::DominantEigenvector => vectors.column(d - 1).into_owned(),
    };
    let phase = raw[pivot].conj() / raw[pivot].norm();
    StateVector::normalized(raw * phase)
}

/// Kraus matrix with pre-normalisation column norms.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausAssembly {
    pub kraus: KrausMatrix,
    pub column_norms: Vec<f64>,
}

/// Rearranges an `N_A' · n_b` output state into an `N_A' × n_b` matrix
/// (`Λ[m, n] = √n_b · ψ[m · n_b + n]`) and normalises each column.
pub fn assemble_kraus(psi_out: &StateVector, n_b: usize) -> Result<KrausAssembly> {
    if n_b == 0 || !psi_out.dim().is_multiple_of(n_b) {
        return Err(Error::DimensionMismatch {
            expected: n_b * (psi_out.dim() / n_b.max(1)).max(1),
            found: psi_out.dim(),
        });
    }
    let rows = psi_out.dim() / n_b;
    let scale = (n_b as f64).sqrt();
    let v = psi_out.entries();
    let mut m = DMatrix::from_fn(rows, n_b, |r, c| v[r * n_b + c] * scale);
    let mut column_norms = Vec::with_capacity(n_b);
    for (column, mut col) in m.column_iter_mut().enumerate() {
        let norm = col.norm();
        if norm < MIN_COLUMN_NORM {
            return Err(Error::DegenerateColumn { column, norm });
        }
        col.unscale_mut(norm);
        column_norms.push(norm);
    }
    Ok(KrausAssembly {
        kraus: KrausMatrix::new(m),
        column_norms,
    })
}

/// `ρ_c ∝ (Λ† ⊗ I) ρ_out (Λ ⊗ I)`, renormalised to unit trace.
pub fn correct_state(rho_out: &DensityMatrix, kraus: &KrausMatrix) -> Result<DensityMatrix> {
    let (rows, cols) = (kraus.rows(), kraus.cols());
    if rows == 0 || !rho_out.dim().is_multiple_of(rows) {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: rho_out.dim(),
        });
    }
    let n_b = rho_out.dim() / rows;
    let lambda = kraus.entries();
    let mut k = DMatrix::zeros(rows * n_b, cols * n_b);
    for m in 0..rows {
        for j in 0..cols {
            for b in 0..n_b {
                k[(m * n_b + b, j * n_b + b)] = lambda[(m, j)];
            }
        }
    }
    let out = k.adjoint() * rho_out.entries() * &k;
    let trace = out.trace().re;
    if !(trace >= MIN_TRACE) {
        return Err(Error::ZeroTrace(trace));
    }
    Ok(DensityMatrix::new(out.unscale(trace))?.hermitized())
}

/// Metrics of one corrected and one uncorrected state against the input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectionReport {
    pub fidelity_corrected: f64,
    pub fidelity_uncorrected: f64,
    pub trace_distance_corrected: f64,
    pub trace_distance_uncorrected: f64,
    pub negativity_corrected: f64,
    pub negativity_uncorrected: f64,
    pub extraction_method: ExtractionMethod,
    /// `max |Λ†Λ − I|` of the recovered Kraus matrix.
    pub isometry_defect: f64,
    /// Frobenius distance of the reconstructed state from its rank-1 extraction.
    pub extraction_residual: f64,
}

impl CorrectionReport {
    /// Both states must be `dim_a · dim_b` dimensional, like `target`.
    pub fn evaluate(
        corrected: &DensityMatrix,
        uncorrected: &DensityMatrix,
        target: &StateVector,
        dims: (usize, usize),
    ) -> Result<Self> {
        Ok(Self {
            fidelity_corrected: fidelity(corrected, target)?,
            fidelity_uncorrected: fidelity(uncorrected, target)?,
            trace_distance_corrected: trace_distance(corrected, target)?,
            trace_distance_uncorrected: trace_distance(uncorrected, target)?,
            negativity_corrected: negativity(corrected, dims.0, dims.1)?,
            negativity_uncorrected: negativity(uncorrected, dims.0, dims.1)?,
            extraction_method: ExtractionMethod::default(),
            isometry_defect: 0.0,
            extraction_residual: 0.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{build_input_state, embedded_input_state, InputStateSpec, OutputBasisSpec};

    fn random_state(d: usize, salt: f64) -> StateVector {
        StateVector::normalized(DVector::from_fn(d, |i, _| {
            let x = i as f64 + salt;
            Complex64::new((1.3 * x).sin(), (0.7 * x * x).cos())
        }))
        .unwrap()
    }

    #[test]
    fn extraction_recovers_pure_state() {
        let psi = random_state(12, 0.4);
        for method in [ExtractionMethod::ColumnDivision, ExtractionMethod::DominantEigenvector] {
            let got = extract_state_vector(&psi.density(), method, DEFAULT_RANK_THRESHOLD).unwrap();
            assert!((got.inner(&psi).norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn extraction_tolerates_small_mixing() {
        let d = 10;
        let psi = random_state(d, 1.1);
        let mixed = psi.density().into_entries().scale(0.98) + DensityMatrix::maximally_mixed(d).into_entries().scale(0.02);
        let rho = DensityMatrix::new(mixed).unwrap();
        let a = extract_state_vector(&rho, ExtractionMethod::ColumnDivision, DEFAULT_RANK_THRESHOLD).unwrap();
        let b = extract_state_vector(&rho, ExtractionMethod::DominantEigenvector, DEFAULT_RANK_THRESHOLD).unwrap();
        assert!(a.inner(&psi).norm() > 0.99 && b.inner(&psi).norm() > 0.99);
        assert!((a.entries() - b.entries()).camax() < 1e-2);
    }

    #[test]
    fn extraction_errors() {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = Complex64::new(0.5, 0.0);
        m[(1, 1)] = Complex64::new(0.5, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(matches!(
            extract_state_vector(&rho, ExtractionMethod::ColumnDivision, 0.1),
            Err(Error::RankAmbiguous { .. })
        ));
        let zero = DensityMatrix::new(DMatrix::zeros(4, 4)).unwrap();
        assert!(matches!(
            extract_state_vector(&zero, ExtractionMethod::ColumnDivision, 0.1),
            Err(Error::ZeroPivot(_))
        ));
    }

    #[test]
    fn identity_channel_round_trip() {
        let spec = InputStateSpec::default();
        let basis = OutputBasisSpec::default();
        let psi_out = embedded_input_state(&spec, &basis).unwrap();
        let k = assemble_kraus(&psi_out, 3).unwrap();
        let want = KrausMatrix::embedding(210, &basis.input_positions(&spec).unwrap());
        assert_eq!(k.kraus, want);
        assert!(k.column_norms.iter().all(|n| (n - 1.0).abs() < 1e-12));
        let corrected = correct_state(&psi_out.density(), &k.kraus).unwrap();
        let input = build_input_state(&spec).unwrap();
        assert!((fidelity(&corrected, &input).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn degenerate_inputs() {
        let mut v = DVector::zeros(6);
        v[0] = Complex64::new(1.0, 0.0);
        let psi = StateVector::new(v);
        assert!(matches!(assemble_kraus(&psi, 3), Err(Error::DegenerateColumn { column: 1, .. })));
        assert!(assemble_kraus(&psi, 4).is_err());
        let k = KrausMatrix::embedding(2, &[0, 1, 0]);
        let far = StateVector::basis(6, 5).density();
        let k2 = KrausMatrix::new(DMatrix::from_fn(2, 3, |r, _| if r == 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() }));
        assert!(matches!(correct_state(&far, &k2), Err(Error::ZeroTrace(_))));
        assert!(correct_state(&far, &k).is_ok());
    }
}
