//! Compressive state tomography over a generalised Gell-Mann basis.

mod ggm;
mod measurement;
mod svt;

pub use ggm::{ggm_basis, GgmBasis, GgmElement};
pub use measurement::{
    add_noise, measure_density, measure_state, read_records, sample_measurement_set, write_records, MeasurementRecord,
};
pub use svt::{
    measurement_residual, project_measurements, reconstruct, spectral_guess, threshold_step, Guess, Reconstruction,
    ReconstructionConfig, ReconstructionDiagnostics,
};
