use std::process::Command;

use oam_cs::channel::OutputBasisSpec;
use oam_cs::harness::{
    run_experiment, simulate_realization, sweep_w, write_rows_csv, ExperimentConfig, GridConfig, RealizationRow,
};

/// Small enough for a few seconds per run.
fn tiny() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::desk().with_output_basis(OutputBasisSpec::new(vec![0], (-2, 2)));
    cfg.grid = GridConfig { n: 128, window: 1.6 };
    cfg.realizations = 4;
    cfg.tomography.m_fraction = 0.5;
    cfg.seed = 42;
    cfg.with_scintillation(1.0)
}

fn csv_bytes(rows: &[RealizationRow]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_rows_csv(&mut buf, rows).unwrap();
    buf
}

#[test]
fn same_seed_gives_identical_csv() {
    let mut cfg = tiny();
    cfg.channel.capture_floor = 0.0;
    let a = run_experiment(&cfg, Some(1)).unwrap();
    let b = run_experiment(&cfg, Some(3)).unwrap();
    assert_eq!(csv_bytes(&a.rows), csv_bytes(&b.rows));
    let header = String::from_utf8(csv_bytes(&a.rows)).unwrap();
    assert!(header.starts_with("seed,W,N_out,m,F_corr,F_unc,D_corr,D_unc,Neg_corr,Neg_unc,iterations,residual,status\n"));
    cfg.seed += 1;
    let c = run_experiment(&cfg, Some(1)).unwrap();
    assert_ne!(csv_bytes(&a.rows), csv_bytes(&c.rows));
}

#[test]
fn failed_realizations_stay_isolated() {
    let mut open = tiny();
    open.channel.capture_floor = 0.0;
    let mut captured: Vec<f64> = (0..open.realizations)
        .map(|i| simulate_realization(&open, i).unwrap().1.captured_power)
        .collect();
    let reference = run_experiment(&open, Some(2)).unwrap();
    assert_eq!(reference.failures(), 0);

    // a floor between the smallest and largest captured power fails some rows
    let powers = captured.clone();
    captured.sort_by(f64::total_cmp);
    let mut gated = open.clone();
    gated.channel.capture_floor = 0.5 * (captured[0] + captured[captured.len() - 1]);
    let out = run_experiment(&gated, Some(2)).unwrap();
    assert!(out.failures() > 0 && out.failures() < out.rows.len());
    for (i, (row, good)) in out.rows.iter().zip(&reference.rows).enumerate() {
        if powers[i] < gated.channel.capture_floor {
            assert_eq!(row.status, "capture_too_low");
            assert!(row.f_corr.is_none());
            assert_eq!(row.seed, good.seed);
        } else {
            assert_eq!(row, good);
        }
    }
    let ok = out.rows.iter().filter(|r| r.is_ok()).count();
    assert_eq!(out.summary.get("F_corr", row_w(&out.rows), gated.n_out()).unwrap().count, ok);
}

fn row_w(rows: &[RealizationRow]) -> f64 {
    rows[0].w
}

#[test]
fn scintillation_sweep_pairs_seeds() {
    let mut cfg = tiny();
    cfg.realizations = 2;
    cfg.channel.capture_floor = 0.0;
    let out = sweep_w(&cfg, &[0.5, 1.5], Some(1)).unwrap();
    assert_eq!(out.rows.len(), 4);
    assert_eq!(out.rows[0].seed, out.rows[2].seed);
    assert_eq!(out.rows[1].seed, out.rows[3].seed);
    assert!((out.rows[0].w - 0.5).abs() < 1e-9 && (out.rows[2].w - 1.5).abs() < 1e-9);
    assert!(sweep_w(&cfg, &[0.0], Some(1)).is_err());
}

fn cli(dir: &std::path::Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_oam-cs"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn cli_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("tiny.toml");
    std::fs::write(
        &config,
        "realizations = 2\n[grid]\nn = 128\nwindow = 1.6\n[output_basis]\np_values = [0]\nell_range = [-2, 2]\n\
         [tomography]\nm_fraction = 0.5\n[channel]\ncapture_floor = 0.0\n[turbulence.path]\nscintillation = 1.0\n",
    )
    .unwrap();
    let cfg = config.to_str().unwrap();

    let (code, err) = cli(dir.path(), &["--config", cfg, "--threads", "1", "run"]);
    assert_eq!(code, 0, "{err}");
    let summary: serde_json::Value =
        serde_json::from_reader(std::fs::File::open(dir.path().join("run_summary.json")).unwrap()).unwrap();
    let first = &summary[0];
    for key in ["metric", "mean", "stderr", "count", "group_keys"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert_eq!(first["group_keys"]["N_out"], 15);
    let csv = std::fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);

    // simulate, tomography and correct chain through files
    for sub in ["simulate", "tomography", "correct"] {
        let (code, err) = cli(dir.path(), &["--config", cfg, "--seed", "7", sub]);
        assert_eq!(code, 0, "{sub}: {err}");
    }
    let report: serde_json::Value =
        serde_json::from_reader(std::fs::File::open(dir.path().join("correction_0000.json")).unwrap()).unwrap();
    let f = |k: &str| report[k].as_f64().unwrap();
    assert!(f("fidelity_corrected") > f("fidelity_uncorrected"), "{report}");

    // an unreachable capture floor fails the realization
    let high = dir.path().join("high.json");
    std::fs::write(&high, r#"{"grid": {"n": 128, "window": 1.6}, "output_basis": {"p_values": [0], "ell_range": [-2, 2]}, "channel": {"capture_floor": 1.5}}"#).unwrap();
    assert_eq!(cli(dir.path(), &["--config", high.to_str().unwrap(), "simulate"]).0, 2);

    // configuration errors
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "realizations = 0\n").unwrap();
    assert_eq!(cli(dir.path(), &["--config", bad.to_str().unwrap(), "run"]).0, 1);
    assert_eq!(cli(dir.path(), &["--config", "/nonexistent.toml", "run"]).0, 1);
    assert_eq!(cli(dir.path(), &["--threads", "0", "run"]).0, 1);
}
