use std::io::{Read, Write};

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::ggm::GgmBasis;
use crate::error::{Error, Result};
use crate::state::{DensityMatrix, StateVector};

/// One measured expectation value `α = tr(τ_index ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub index: usize,
    pub alpha: f64,
}

/// `m` distinct GGM indices drawn uniformly without replacement. The identity
/// (index 0) is always first; the rest follow in draw order.
pub fn sample_measurement_set<R: Rng + ?Sized>(dim: usize, m: usize, rng: &mut R) -> Result<Vec<usize>> {
    let total = dim * dim;
    if m == 0 || m > total {
        return Err(Error::InvalidCount {
            requested: m,
            available: total,
        });
    }
    let mut out = Vec::with_capacity(m);
    out.push(0);
    out.extend(sample(rng, total - 1, m - 1).into_iter().map(|i| i + 1));
    Ok(out)
}

fn check_dim(basis: &GgmBasis, found: usize) -> Result<()> {
    if basis.dim() != found {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found,
        });
    }
    Ok(())
}

/// Exact expectations `⟨ψ|τ_i|ψ⟩` for the given indices.
pub fn measure_state(state: &StateVector, basis: &GgmBasis, indices: &[usize]) -> Result<Vec<MeasurementRecord>> {
    check_dim(basis, state.dim())?;
    Ok(indices
        .iter()
        .map(|&index| MeasurementRecord {
            index,
            alpha: basis.expectation_state(index, state),
        })
        .collect())
}

/// Exact expectations `tr(τ_i ρ)` of a mixed state.
pub fn measure_density(rho: &DensityMatrix, basis: &GgmBasis, indices: &[usize]) -> Result<Vec<MeasurementRecord>> {
    check_dim(basis, rho.dim())?;
    Ok(indices
        .iter()
        .map(|&index| MeasurementRecord {
            index,
            alpha: basis.expectation(index, rho.entries()),
        })
        .collect())
}

/// Adds independent `N(0, σ²)` noise to every record. `σ = 0` is a no-op.
pub fn add_noise<R: Rng + ?Sized>(records: &mut [MeasurementRecord], sigma: f64, rng: &mut R) -> Result<()> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("noise sigma {sigma} must be finite and >= 0")));
    }
    if sigma == 0.0 {
        return Ok(());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(format!("noise sigma {sigma}: {e}")))?;
    records.iter_mut().for_each(|r| r.alpha += normal.sample(rng));
    Ok(())
}

/// Writes records as CSV with header `index,alpha`.
pub fn write_records<W: Write>(writer: W, records: &[MeasurementRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(reader: R) -> Result<Vec<MeasurementRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    let records = r.deserialize().collect::<std::result::Result<Vec<MeasurementRecord>, _>>()?;
    if let Some(bad) = records.iter().find(|r| !r.alpha.is_finite()) {
        return Err(Error::Format(format!("non-finite alpha for index {}", bad.index)));
    }
    Ok(records)
}
