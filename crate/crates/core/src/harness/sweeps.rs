use std::io::Write;

use serde::Serialize;

use super::config::{ExperimentConfig, ScreenValidationConfig};
use super::experiment::{run_experiment, ExperimentOutput};
use super::seeds::{child_rng, SeedTag};
use super::summary::SummaryTable;
use crate::channel::{InputStateSpec, OutputBasisSpec};
use crate::error::{Error, Result};
use crate::optics::GridSpec;
use crate::turbulence::{generate_screen_pair, kolmogorov_structure_function, StructureAccumulator, TurbulenceParams};

/// Nested output bases of growing size, all containing the input modes:
/// the input modes alone, then `p ≤ 2` over `ℓ ∈ [−1, 2]`, `[−3, 4]` and
/// `[−5, 6]` (`N_out` = 9, 36, 72, 108 for the default input). The OAM range
/// grows because turbulence spreads power mostly across neighbouring `ℓ`.
pub fn default_nout_bases(input: &InputStateSpec) -> Vec<OutputBasisSpec> {
    vec![
        OutputBasisSpec::input_only(input),
        OutputBasisSpec::new(vec![0, 1, 2], (-1, 2)),
        OutputBasisSpec::new(vec![0, 1, 2], (-3, 4)),
        OutputBasisSpec::new(vec![0, 1, 2], (-5, 6)),
    ]
}

/// Runs the experiment once per output basis with identical realization seeds.
pub fn sweep_nout(config: &ExperimentConfig, bases: &[OutputBasisSpec], threads: Option<usize>) -> Result<ExperimentOutput> {
    if bases.is_empty() {
        return Err(Error::Config("no output bases to sweep".into()));
    }
    let mut out = ExperimentOutput {
        rows: Vec::new(),
        summary: SummaryTable::default(),
    };
    for basis in bases {
        out.extend(run_experiment(&config.with_output_basis(basis.clone()), threads)?);
    }
    Ok(out)
}

/// Runs the experiment once per scintillation strength with identical seeds.
pub fn sweep_w(config: &ExperimentConfig, targets: &[f64], threads: Option<usize>) -> Result<ExperimentOutput> {
    if targets.is_empty() {
        return Err(Error::Config("no W targets to sweep".into()));
    }
    if let Some(w) = targets.iter().find(|w| !(**w > 0.0)) {
        return Err(Error::Config(format!("W target {w} must be positive")));
    }
    let mut out = ExperimentOutput {
        rows: Vec::new(),
        summary: SummaryTable::default(),
    };
    for &w in targets {
        out.extend(run_experiment(&config.with_scintillation(w), threads)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScreenValidationRow {
    #[serde(rename = "N_s")]
    pub subharmonic_levels: u32,
    pub r: f64,
    pub r_over_r0: f64,
    #[serde(rename = "D_measured")]
    pub d_measured: f64,
    #[serde(rename = "D_analytic")]
    pub d_analytic: f64,
    pub relative_error: f64,
    pub stderr: f64,
}

/// Integer pixel lags covering `[r0 / 2, 2 r0]`.
pub fn validation_lags(cfg: &ScreenValidationConfig) -> Vec<usize> {
    let r0_px = cfg.r0 / (cfg.window / cfg.n as f64);
    let lo = (0.5 * r0_px).ceil().max(1.0) as usize;
    let hi = (2.0 * r0_px).floor() as usize;
    (lo..=hi).collect()
}

/// Structure function of a screen ensemble against `6.88 (r / r0)^(5/3)`,
/// once per configured sub-harmonic level count. Every level count sees the
/// same high-frequency draws.
pub fn validate_screens(cfg: &ScreenValidationConfig, seed: u64) -> Result<Vec<ScreenValidationRow>> {
    let grid = GridSpec::new(cfg.n, cfg.window)?;
    if !(cfg.r0 > 0.0) || cfg.screens == 0 {
        return Err(Error::Config("screen validation needs r0 > 0 and at least one screen".into()));
    }
    let lags = validation_lags(cfg);
    if lags.is_empty() {
        return Err(Error::Config(format!("r0 = {} m is not resolved by the grid", cfg.r0)));
    }
    // one slab whose Fried parameter is exactly r0
    let (wavelength, dz) = (1e-6, 1000.0);
    let cn2 = wavelength * wavelength / (dz * (cfg.r0 / 0.185f64).powf(5.0 / 3.0));
    let mut rows = Vec::new();
    for &levels in &cfg.levels {
        let params = TurbulenceParams::new(cn2, dz, wavelength, levels)?;
        let mut acc = StructureAccumulator::new(&lags, grid.spacing());
        let mut pair = 0u64;
        while acc.count() < cfg.screens {
            let mut rng = child_rng(seed, pair, SeedTag::Screens);
            let (a, b) = generate_screen_pair(grid, &params, dz, &mut rng)?;
            acc.push(&a);
            if acc.count() < cfg.screens {
                acc.push(&b);
            }
            pair += 1;
        }
        for e in acc.estimates() {
            let d_analytic = kolmogorov_structure_function(e.r, cfg.r0);
            rows.push(ScreenValidationRow {
                subharmonic_levels: levels,
                r: e.r,
                r_over_r0: e.r / cfg.r0,
                d_measured: e.mean,
                d_analytic,
                relative_error: (e.mean - d_analytic) / d_analytic,
                stderr: e.stderr,
            });
        }
    }
    Ok(rows)
}

pub fn write_validation_csv<W: Write>(writer: W, rows: &[ScreenValidationRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
