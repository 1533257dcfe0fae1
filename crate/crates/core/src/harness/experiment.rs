use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::seeds::{child_rng, child_seed, SeedTag};
use super::summary::SummaryTable;
use crate::channel::{build_input_state, propagate_choi, truncate_to_input_subspace, ChoiOutput, N_B};
use crate::correction::{assemble_kraus, correct_state, extract_state_vector, CorrectionReport};
use crate::error::{Error, Result};
use crate::state::DensityMatrix;
use crate::tomography::{
    add_noise, measure_state, reconstruct, sample_measurement_set, GgmBasis, MeasurementRecord, Reconstruction,
};
use crate::turbulence::TurbulenceRealization;

/// One CSV row. Metric columns are empty when the realization failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationRow {
    pub seed: u64,
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "N_out")]
    pub n_out: usize,
    pub m: usize,
    #[serde(rename = "F_corr")]
    pub f_corr: Option<f64>,
    #[serde(rename = "F_unc")]
    pub f_unc: Option<f64>,
    #[serde(rename = "D_corr")]
    pub d_corr: Option<f64>,
    #[serde(rename = "D_unc")]
    pub d_unc: Option<f64>,
    #[serde(rename = "Neg_corr")]
    pub neg_corr: Option<f64>,
    #[serde(rename = "Neg_unc")]
    pub neg_unc: Option<f64>,
    pub iterations: Option<usize>,
    pub residual: Option<f64>,
    pub status: String,
}

impl RealizationRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn failed(seed: u64, w: f64, n_out: usize, m: usize, err: &Error) -> Self {
        let (iterations, residual) = match err {
            Error::NotConverged { iterations, residual, .. } => (Some(*iterations), Some(*residual)),
            _ => (None, None),
        };
        Self {
            seed,
            w,
            n_out,
            m,
            f_corr: None,
            f_unc: None,
            d_corr: None,
            d_unc: None,
            neg_corr: None,
            neg_unc: None,
            iterations,
            residual,
            status: err.status_tag().to_string(),
        }
    }
}

/// Everything computed for one realization.
#[derive(Debug, Clone)]
pub struct RealizationResult {
    pub choi: ChoiOutput,
    pub records: Vec<MeasurementRecord>,
    pub reconstruction: Reconstruction,
    pub corrected: DensityMatrix,
    pub uncorrected: DensityMatrix,
    pub report: CorrectionReport,
}

/// Turbulence seed of realization `index`.
pub fn turbulence_seed(config: &ExperimentConfig, index: usize) -> u64 {
    child_seed(config.seed, index as u64, SeedTag::Turbulence)
}

/// Screens and propagated Choi state of realization `index`.
pub fn simulate_realization(config: &ExperimentConfig, index: usize) -> Result<(TurbulenceRealization, ChoiOutput)> {
    let realization = TurbulenceRealization::generate(
        config.grid_spec()?,
        config.turbulence_params()?,
        turbulence_seed(config, index),
    )?;
    let choi = propagate_choi(&config.input, &config.output_basis, &realization, &config.channel)?;
    Ok((realization, choi))
}

/// Randomly chosen GGM expectation values of the output state.
pub fn measure_choi(config: &ExperimentConfig, index: usize, choi: &ChoiOutput) -> Result<Vec<MeasurementRecord>> {
    let basis = GgmBasis::new(choi.state.dim())?;
    let mut rng = child_rng(config.seed, index as u64, SeedTag::Measurement);
    let indices = sample_measurement_set(basis.dim(), config.measurement_count(), &mut rng)?;
    let mut records = measure_state(&choi.state, &basis, &indices)?;
    let mut noise = child_rng(config.seed, index as u64, SeedTag::Noise);
    add_noise(&mut records, config.tomography.noise_sigma, &mut noise)?;
    Ok(records)
}

pub fn reconstruct_records(config: &ExperimentConfig, records: &[MeasurementRecord]) -> Result<Reconstruction> {
    let basis = GgmBasis::new(config.n_out())?;
    reconstruct(records, &basis, &config.reconstruction_config())
}

/// Corrects the simulated output with the Kraus matrix recovered from
/// `reconstructed` and scores both corrected and truncated states.
pub fn correct_and_score(
    config: &ExperimentConfig,
    rho_out: &DensityMatrix,
    reconstructed: &DensityMatrix,
) -> Result<(DensityMatrix, DensityMatrix, CorrectionReport)> {
    let method = config.tomography.extraction;
    let psi = extract_state_vector(reconstructed, method, config.tomography.rank_threshold)?;
    let kraus = assemble_kraus(&psi, N_B)?;
    let corrected = correct_state(rho_out, &kraus.kraus)?;
    let uncorrected = truncate_to_input_subspace(rho_out, &config.input, &config.output_basis)?;
    let target = build_input_state(&config.input)?;
    let mut report = CorrectionReport::evaluate(&corrected, &uncorrected, &target, (N_B, N_B))?;
    report.extraction_method = method;
    report.isometry_defect = kraus.kraus.isometry_defect();
    report.extraction_residual = reconstructed.distance(&psi.density());
    Ok((corrected, uncorrected, report))
}

/// Full pipeline for realization `index`.
pub fn process_realization(config: &ExperimentConfig, index: usize) -> Result<RealizationResult> {
    let (_, choi) = simulate_realization(config, index)?;
    let records = measure_choi(config, index, &choi)?;
    let reconstruction = reconstruct_records(config, &records)?;
    let rho_out = choi.state.density();
    let (corrected, uncorrected, report) = correct_and_score(config, &rho_out, &reconstruction.state)?;
    Ok(RealizationResult {
        choi,
        records,
        reconstruction,
        corrected,
        uncorrected,
        report,
    })
}

/// Row for realization `index`; failures become a status, never a panic.
pub fn run_realization(config: &ExperimentConfig, index: usize, w: f64) -> RealizationRow {
    let (seed, n_out, m) = (turbulence_seed(config, index), config.n_out(), config.measurement_count());
    match process_realization(config, index) {
        Ok(r) => RealizationRow {
            seed,
            w,
            n_out,
            m,
            f_corr: Some(r.report.fidelity_corrected),
            f_unc: Some(r.report.fidelity_uncorrected),
            d_corr: Some(r.report.trace_distance_corrected),
            d_unc: Some(r.report.trace_distance_uncorrected),
            neg_corr: Some(r.report.negativity_corrected),
            neg_unc: Some(r.report.negativity_uncorrected),
            iterations: Some(r.reconstruction.diagnostics.iterations),
            residual: Some(r.reconstruction.diagnostics.residual),
            status: "ok".into(),
        },
        Err(e) => RealizationRow::failed(seed, w, n_out, m, &e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<RealizationRow>,
    pub summary: SummaryTable,
}

impl ExperimentOutput {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_ok()).count()
    }

    pub fn extend(&mut self, other: ExperimentOutput) {
        self.rows.extend(other.rows);
        self.summary.entries.extend(other.summary.entries);
    }
}

/// Runs `f(i)` for `i in 0..count` on a pool of `threads` workers (all cores
/// when `None`), returning results in index order.
pub fn run_indexed<T, F>(count: usize, threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..count).into_par_iter().map(f).collect()))
}

/// All realizations of `config`, one row each, plus mean ± standard error of
/// every metric over the successful rows.
pub fn run_experiment(config: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentOutput> {
    config.validate()?;
    let w = config.scintillation()?;
    let rows = run_indexed(config.realizations, threads, |i| run_realization(config, i, w))?;
    let summary = SummaryTable::from_rows(&rows);
    Ok(ExperimentOutput { rows, summary })
}

pub fn write_rows_csv<W: Write>(writer: W, rows: &[RealizationRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
