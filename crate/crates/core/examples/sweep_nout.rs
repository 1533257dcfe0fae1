//! Mean corrected negativity against the output dimension, with paired
//! turbulence seeds across the nested bases.
//!
//! cargo run --release --example sweep_nout -- [realizations]

use oam_cs::harness::{default_nout_bases, sweep_nout, ExperimentConfig};

fn main() -> oam_cs::Result<()> {
    let mut cfg = ExperimentConfig::desk().with_scintillation(1.0);
    cfg.realizations = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    cfg.channel.capture_floor = 0.0;
    let out = sweep_nout(&cfg, &default_nout_bases(&cfg.input), None)?;
    println!("N_out  Neg_corr          F_corr   ok");
    for e in out.summary.entries.iter().filter(|e| e.metric == "Neg_corr") {
        let f = out.summary.get("F_corr", e.group_keys.w, e.group_keys.n_out).and_then(|f| f.mean);
        println!(
            "{:>5}  {:.3} +- {:.3}   {:.3}   {}",
            e.group_keys.n_out,
            e.mean.unwrap_or(f64::NAN),
            e.stderr.unwrap_or(f64::NAN),
            f.unwrap_or(f64::NAN),
            e.count
        );
    }
    Ok(())
}
