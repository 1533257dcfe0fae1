//! A few realizations of the desk-scale experiment: turbulence, tomography,
//! correction and the summary table.
//!
//! cargo run --release --example end_to_end -- [realizations] [W]

use oam_cs::harness::{run_experiment, ExperimentConfig};

fn main() -> oam_cs::Result<()> {
    let mut args = std::env::args().skip(1);
    let realizations = args.next().and_then(|a| a.parse().ok()).unwrap_or(4);
    let w = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.5);
    let mut cfg = ExperimentConfig::desk().with_scintillation(w);
    cfg.realizations = realizations;
    println!("W = {w}, N_out = {}, m = {}, {realizations} realizations", cfg.n_out(), cfg.measurement_count());

    let out = run_experiment(&cfg, None)?;
    for r in &out.rows {
        match (r.f_corr, r.f_unc) {
            (Some(fc), Some(fu)) => println!("  seed {:>20}  F {fu:.3} -> {fc:.3}", r.seed),
            _ => println!("  seed {:>20}  {}", r.seed, r.status),
        }
    }
    for e in &out.summary.entries {
        if let (Some(m), s) = (e.mean, e.stderr) {
            println!("{:<9} {m:.4} +- {:.4}", e.metric, s.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}
