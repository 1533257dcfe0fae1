use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ggm::GgmBasis;
use super::measurement::MeasurementRecord;
use crate::error::{Error, Result};
use crate::linalg;
use crate::state::DensityMatrix;

/// Starting point of the iteration.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum Guess {
    /// `I / d`.
    #[default]
    MaximallyMixed,
    /// Projector onto the leading eigenvector of the data-consistent matrix
    /// closest to `I / d` (see [`spectral_guess`]).
    Spectral,
    Provided(DensityMatrix),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReconstructionConfig {
    /// Eigenvalues at or below this are discarded.
    pub epsilon0: f64,
    /// Frobenius distance between consecutive iterates that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
    #[serde(skip)]
    pub guess: Guess,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        Self {
            epsilon0: 1e-3,
            tol: 1e-6,
            max_iter: 5000,
            guess: Guess::MaximallyMixed,
        }
    }
}

impl ReconstructionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon0 > 0.0 && self.epsilon0 < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon0 = {} must lie in (0, 1)", self.epsilon0)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol = {} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// Hermitises, drops eigenvalues `≤ epsilon0`, rebuilds and rescales to unit trace.
pub fn threshold_step(rho: &DensityMatrix, epsilon0: f64) -> Result<DensityMatrix> {
    let h = rho.hermitized();
    let (values, vectors) = linalg::hermitian_eigen(h.entries());
    let kept: Vec<usize> = (0..values.len()).filter(|&i| values[i] > epsilon0).collect();
    if kept.is_empty() {
        return Err(Error::AllBelowThreshold(epsilon0));
    }
    let d = rho.dim();
    let total: f64 = kept.iter().map(|&i| values[i]).sum();
    let mut scaled = DMatrix::<Complex64>::zeros(d, kept.len());
    let mut basis = DMatrix::<Complex64>::zeros(d, kept.len());
    for (c, &i) in kept.iter().enumerate() {
        let col = vectors.column(i);
        basis.set_column(c, &col);
        scaled.set_column(c, &col.scale(values[i] / total));
    }
    let mut out = scaled * basis.adjoint();
    // exact Hermiticity; the product is Hermitian only up to rounding
    for i in 0..d {
        out[(i, i)].im = 0.0;
        for j in 0..i {
            out[(j, i)] = out[(i, j)].conj();
        }
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// One sequential pass `ρ ← ρ + (α_i − tr(τ_i ρ)) τ_i` over `records`.
pub fn project_measurements(rho: &DensityMatrix, records: &[MeasurementRecord], basis: &GgmBasis) -> DensityMatrix {
    let mut out = rho.clone();
    project_in_place(&mut out, records, basis);
    out
}

fn project_in_place(rho: &mut DensityMatrix, records: &[MeasurementRecord], basis: &GgmBasis) {
    let m = rho.entries_mut();
    for r in records {
        let gap = r.alpha - basis.expectation(r.index, m);
        basis.add_scaled_to(r.index, gap, m);
    }
}

/// `‖M ρ − α‖₂` over the records.
pub fn measurement_residual(rho: &DensityMatrix, records: &[MeasurementRecord], basis: &GgmBasis) -> f64 {
    records
        .iter()
        .map(|r| (basis.expectation(r.index, rho.entries()) - r.alpha).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Pure state along the top eigenvector of `I / d` projected onto the
/// measurement constraints.
///
/// The thresholded iteration has spurious mixed fixed points when started
/// from `I / d`; starting near the dominant direction of the data avoids them
/// for low-rank truths.
pub fn spectral_guess(records: &[MeasurementRecord], basis: &GgmBasis) -> DensityMatrix {
    let d = basis.dim();
    let start = project_measurements(&DensityMatrix::maximally_mixed(d), records, basis);
    let (_, vectors) = linalg::hermitian_eigen(start.hermitized().entries());
    let top = vectors.column(d - 1);
    DensityMatrix::new_unchecked(top * top.adjoint())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionDiagnostics {
    pub iterations: usize,
    /// Measurement residual of the returned (thresholded) state.
    pub residual: f64,
    /// Frobenius step size at the last iteration.
    pub last_step: f64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub state: DensityMatrix,
    pub diagnostics: ReconstructionDiagnostics,
}

/// Modified singular-value thresholding: alternate [`threshold_step`] and
/// [`project_measurements`] from the guess until consecutive iterates differ by
/// less than `tol`, then threshold once more.
pub fn reconstruct(
    records: &[MeasurementRecord],
    basis: &GgmBasis,
    config: &ReconstructionConfig,
) -> Result<Reconstruction> {
    config.validate()?;
    if records.is_empty() {
        return Err(Error::InvalidCount {
            requested: 0,
            available: basis.len(),
        });
    }
    if let Some(r) = records.iter().find(|r| r.index >= basis.len()) {
        return Err(Error::InvalidCount {
            requested: r.index,
            available: basis.len(),
        });
    }
    let d = basis.dim();
    let mut rho = match &config.guess {
        Guess::MaximallyMixed => DensityMatrix::maximally_mixed(d),
        Guess::Spectral => spectral_guess(records, basis),
        Guess::Provided(g) if g.dim() == d => g.clone(),
        Guess::Provided(g) => {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: g.dim(),
            })
        }
    };
    let start = Instant::now();
    let mut iterations = 0;
    let mut last_step = f64::INFINITY;
    while iterations < config.max_iter {
        iterations += 1;
        let mut next = threshold_step(&rho, config.epsilon0)?;
        project_in_place(&mut next, records, basis);
        last_step = rho.distance(&next);
        rho = next;
        if last_step < config.tol {
            break;
        }
    }
    let state = threshold_step(&rho, config.epsilon0)?;
    let residual = measurement_residual(&state, records, basis);
    if last_step >= config.tol {
        return Err(Error::NotConverged {
            iterations,
            residual,
            iterate: Box::new(state),
        });
    }
    Ok(Reconstruction {
        state,
        diagnostics: ReconstructionDiagnostics {
            iterations,
            residual,
            last_step,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    })
}
