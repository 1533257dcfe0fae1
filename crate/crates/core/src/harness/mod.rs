//! Seeded Monte-Carlo experiments, parameter sweeps and figure-ready tables.

mod config;
mod experiment;
mod seeds;
mod summary;
mod sweeps;

pub use config::{
    ExperimentConfig, GridConfig, GuessKind, PathLength, Preset, ScreenValidationConfig, TomographyConfig,
    TurbulenceConfig,
};
pub use experiment::{
    correct_and_score, measure_choi, process_realization, reconstruct_records, run_experiment, run_indexed,
    run_realization, simulate_realization, turbulence_seed, write_rows_csv, ExperimentOutput, RealizationResult,
    RealizationRow,
};
pub use seeds::{child_rng, child_seed, SeedTag};
pub use summary::{GroupKeys, SummaryEntry, SummaryTable, METRICS};
pub use sweeps::{
    default_nout_bases, sweep_nout, sweep_w, validate_screens, validation_lags, write_validation_csv,
    ScreenValidationRow,
};
