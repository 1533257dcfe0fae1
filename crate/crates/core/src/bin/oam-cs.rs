use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use oam_cs::channel::{propagate_branch, ChoiArtifact, ChoiOutput};
use oam_cs::correction::CorrectionReport;
use oam_cs::harness::{
    correct_and_score, default_nout_bases, measure_choi, reconstruct_records, run_experiment, simulate_realization,
    sweep_nout, sweep_w, turbulence_seed, validate_screens, write_rows_csv, write_validation_csv, ExperimentConfig,
    ExperimentOutput, Preset,
};
use oam_cs::oamf;
use oam_cs::state::DensityMatrix;
use oam_cs::tomography::{read_records, write_records, ReconstructionDiagnostics};
use oam_cs::{Error, Result};

#[derive(Parser)]
#[command(name = "oam-cs", version, about = "Turbulent OAM channel simulation, tomography and correction")]
struct Cli {
    /// JSON or TOML file overlaid on the preset
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config)
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads; all cores when omitted
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = PresetArg::Desk)]
    preset: PresetArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Desk,
    Paper,
}

#[derive(Args)]
struct Realization {
    /// Realization index
    #[arg(long, default_value_t = 0)]
    index: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate one realization and dump its Choi state and measurements
    Simulate {
        #[command(flatten)]
        at: Realization,
        /// Also write the three output fields as OAMF files
        #[arg(long)]
        dump_fields: bool,
    },
    /// Reconstruct the output state from saved measurement records
    Tomography {
        #[command(flatten)]
        at: Realization,
        /// Records CSV; defaults to the one `simulate` wrote
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Correct a simulated output with a saved reconstruction
    Correct {
        #[command(flatten)]
        at: Realization,
        #[arg(long)]
        choi: Option<PathBuf>,
        #[arg(long)]
        reconstruction: Option<PathBuf>,
    },
    /// Every realization of the configured experiment
    Run,
    /// Paired runs over nested output bases (N_out = 9, 36, 72, 108)
    SweepNout {
        #[arg(long, default_value_t = 0.0)]
        capture_floor: f64,
    },
    /// Paired runs over scintillation strengths
    SweepW {
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 2.0])]
        w: Vec<f64>,
    },
    /// Structure function of a screen ensemble against Kolmogorov
    ValidateScreens,
}

#[derive(Serialize, Deserialize)]
struct ReconstructionArtifact {
    iterations: usize,
    residual: f64,
    last_step: f64,
    wall_time_s: f64,
    rho: Vec<Vec<[f64; 2]>>,
}

impl ReconstructionArtifact {
    fn new(d: &ReconstructionDiagnostics, rho: &DensityMatrix) -> Self {
        let m = rho.entries();
        Self {
            iterations: d.iterations,
            residual: d.residual,
            last_step: d.last_step,
            wall_time_s: d.wall_time_s,
            rho: (0..m.nrows()).map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }

    fn density(&self) -> Result<DensityMatrix> {
        let n = self.rho.len();
        if self.rho.iter().any(|r| r.len() != n) {
            return Err(Error::Format("reconstructed matrix is not square".into()));
        }
        DensityMatrix::new(DMatrix::from_fn(n, n, |r, c| Complex64::new(self.rho[r][c][0], self.rho[r][c][1])))
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let preset = match cli.preset {
        PresetArg::Desk => Preset::Desk,
        PresetArg::Paper => Preset::Paper,
    };
    let mut cfg = ExperimentConfig::preset(preset);
    if let Some(path) = &cli.config {
        cfg = cfg.merged_with_file(path)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.threads == Some(0) {
        return Err(Error::Config("--threads must be at least 1".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    serde_json::to_writer(create(dir, name)?, value)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
}

fn finish_table(dir: &Path, stem: &str, out: &ExperimentOutput) -> Result<bool> {
    write_rows_csv(create(dir, &format!("{stem}.csv"))?, &out.rows)?;
    out.summary.write_json(create(dir, &format!("{stem}_summary.json"))?)?;
    for e in out.summary.entries.iter().filter(|e| e.metric == "F_corr" || e.metric == "Neg_corr") {
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!(
            "W={:<5} N_out={:<4} {:<8} {} ± {} (n={})",
            e.group_keys.w,
            e.group_keys.n_out,
            e.metric,
            fmt(e.mean),
            fmt(e.stderr),
            e.count
        );
    }
    let failures = out.failures();
    if failures > 0 {
        eprintln!("{failures} of {} realizations failed", out.rows.len());
    }
    Ok(failures == 0)
}

fn execute(cli: &Cli, cfg: &ExperimentConfig) -> Result<bool> {
    let dir = cli.out_dir.as_path();
    fs::create_dir_all(dir)?;
    match &cli.command {
        Command::Simulate { at, dump_fields } => {
            let i = at.index;
            let (realization, choi) = match simulate_realization(cfg, i) {
                Ok(v) => v,
                Err(e @ Error::CaptureTooLow { .. }) => {
                    eprintln!("realization {i}: {e}");
                    return Ok(false);
                }
                Err(e) => return Err(e),
            };
            write_json(dir, &format!("choi_{i:04}.json"), &ChoiArtifact::from(&choi))?;
            let records = measure_choi(cfg, i, &choi)?;
            write_records(create(dir, &format!("records_{i:04}.csv"))?, &records)?;
            if *dump_fields {
                let grid = cfg.grid_spec()?;
                for (k, (mode, wl)) in cfg.input.modes().iter().zip(cfg.input.wavelengths).enumerate() {
                    let field = propagate_branch(*mode, wl, &realization, grid, cfg.input.waist, cfg.channel.absorber.as_ref())?;
                    oamf::write_field(&mut create(dir, &format!("field_{i:04}_{k}.oamf"))?, &field)?;
                }
            }
            println!(
                "realization {i}: seed {} captured power {:.4}, {} records",
                turbulence_seed(cfg, i),
                choi.captured_power,
                records.len()
            );
            Ok(true)
        }
        Command::Tomography { at, records } => {
            let i = at.index;
            let path = records.clone().unwrap_or_else(|| dir.join(format!("records_{i:04}.csv")));
            let file = File::open(&path).map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
            let records = read_records(file)?;
            match reconstruct_records(cfg, &records) {
                Ok(r) => {
                    write_json(dir, &format!("reconstruction_{i:04}.json"), &ReconstructionArtifact::new(&r.diagnostics, &r.state))?;
                    println!("realization {i}: {} iterations, residual {:.3e}", r.diagnostics.iterations, r.diagnostics.residual);
                    Ok(true)
                }
                Err(e) => {
                    eprintln!("realization {i}: {e}");
                    Ok(false)
                }
            }
        }
        Command::Correct { at, choi, reconstruction } => {
            let i = at.index;
            let choi_path = choi.clone().unwrap_or_else(|| dir.join(format!("choi_{i:04}.json")));
            let rec_path = reconstruction.clone().unwrap_or_else(|| dir.join(format!("reconstruction_{i:04}.json")));
            let choi = ChoiOutput::try_from(read_json::<ChoiArtifact>(&choi_path)?)?;
            let rec: ReconstructionArtifact = read_json(&rec_path)?;
            let report: CorrectionReport = match correct_and_score(cfg, &choi.state.density(), &rec.density()?) {
                Ok((_, _, report)) => report,
                Err(e) => {
                    eprintln!("realization {i}: {e}");
                    return Ok(false);
                }
            };
            write_json(dir, &format!("correction_{i:04}.json"), &report)?;
            println!(
                "realization {i}: F {:.4} -> {:.4}, Neg {:.4} -> {:.4}",
                report.fidelity_uncorrected, report.fidelity_corrected, report.negativity_uncorrected, report.negativity_corrected
            );
            Ok(true)
        }
        Command::Run => finish_table(dir, "run", &run_experiment(cfg, cli.threads)?),
        Command::SweepNout { capture_floor } => {
            let mut cfg = cfg.clone();
            cfg.channel.capture_floor = *capture_floor;
            cfg.validate()?;
            let out = sweep_nout(&cfg, &default_nout_bases(&cfg.input), cli.threads)?;
            finish_table(dir, "sweep_nout", &out)
        }
        Command::SweepW { w } => finish_table(dir, "sweep_w", &sweep_w(cfg, w, cli.threads)?),
        Command::ValidateScreens => {
            let rows = validate_screens(&cfg.screens, cfg.seed)?;
            write_validation_csv(create(dir, "screens.csv")?, &rows)?;
            for levels in &cfg.screens.levels {
                let worst = rows
                    .iter()
                    .filter(|r| r.subharmonic_levels == *levels)
                    .map(|r| r.relative_error.abs())
                    .fold(0.0, f64::max);
                println!("N_s={levels}: max relative error {:.1}%", 100.0 * worst);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match execute(&cli, &cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
