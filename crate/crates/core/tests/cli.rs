//! End-to-end runs of the `georoute` binary.

use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn georoute(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_georoute")).args(args).output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn simulate_writes_histograms_trajectory_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim");
    let o = georoute(&[
        "simulate", "--strategy", "sector", "--phi1", "-30deg", "--phi2", "30deg", "--n", "1000", "--K", "1.717",
        "--trials", "50", "--seed", "7", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let h = json(&out.join("tau_histogram.json"));
    for key in ["edges", "counts", "trials", "mean", "stddev", "censored"] {
        assert!(h.get(key).is_some(), "{key}");
    }
    assert_eq!(h["trials"], 50);
    assert_eq!(h["manifest"], "manifest.json");
    let traj = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(traj.starts_with("hop,x,y\n0,0,0\n"));
    let m = json(&out.join("manifest.json"));
    assert_eq!(m["master_seed"], 7);
    assert_eq!(m["seeds"][0]["seeds"].as_array().unwrap().len(), 50);
    assert!(m["outputs"].as_array().unwrap().iter().any(|v| v == "trajectory.csv"));
}

#[test]
fn simulate_discrete_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("disc");
    let o = georoute(&[
        "simulate-discrete", "--strategy", "quadrant_uniform", "--n", "1000", "--M", "0.142857", "--trials", "20",
        "--format", "csv", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("histogram.csv")).unwrap();
    assert!(csv.starts_with("bin_start,bin_end,count\n"));
    let path = fs::read_to_string(out.join("path.csv")).unwrap();
    assert!(path.starts_with("hop,node,x,y\n0,0,0,0\n"));
    assert_eq!(fs::read_to_string(out.join("field.csv")).unwrap().lines().count(), 1001);
    let summary = json(&out.join("summary.json"));
    assert_eq!(summary["histogram"]["trials"], 20);
}

#[test]
fn analyze_reports_drift_and_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("an");
    let o = georoute(&[
        "analyze", "--strategy", "sector", "--n", "1000", "--M", "0.142857142857", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let a = json(&out.join("analysis.json"));
    assert!((a["beta"].as_f64().unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-12);
    assert!((a["predicted"]["point_estimate"].as_f64().unwrap() - 11.0).abs() < 0.01);
    assert!((a["mu_bound"].as_f64().unwrap() - 223.0).abs() < 50.0);
}

#[test]
fn sweep_and_capacity_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sw");
    let o = georoute(&[
        "sweep", "--strategy", "quadrant", "--K", "1", "--n-list", "1000,10000,100000", "--trials", "20", "--format",
        "csv", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sweep = fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 4);
    assert!(out.join("concentration.csv").exists());

    let out = dir.path().join("cap");
    let o = georoute(&["capacity", "--n", "4000", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out.join("tile_report.json"));
    for key in [
        "a", "tiles", "colors_used", "J", "max_tile_hops", "mu_bound", "achieved_rate", "target_rate", "failed_flows",
    ] {
        assert!(r.get(key).is_some(), "{key}");
    }
    let tiles = r["tiles"].as_u64().unwrap() as usize;
    assert_eq!(r["tile_hops"].as_array().unwrap().len(), tiles);
    let coloring = fs::read_to_string(out.join("coloring.csv")).unwrap();
    assert_eq!(coloring.lines().count(), tiles + 1);
}

#[test]
fn exit_codes() {
    let o = georoute(&["simulate", "--strategy", "fractional", "--p", "1.5", "--n", "1000", "--K", "1.7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`p`"));
    let o = georoute(&["simulate", "--nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    // a file where the output directory should go makes the write fail
    let blocker = dir.path().join("blocked");
    fs::write(&blocker, "").unwrap();
    let o = georoute(&[
        "simulate", "--strategy", "greedy", "--n", "1000", "--K", "1.7", "--trials", "2", "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = georoute(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "strategy = quadrant_adversarial\nn = 1000\nK = 1.717\ntrials = 30\nseed = 5\nout = RUN\n").unwrap();
    let mut contents = Vec::new();
    for _ in 0..2 {
        let o = Command::new(env!("CARGO_BIN_EXE_georoute"))
            .current_dir(dir.path())
            .args(["simulate", "--config", cfg.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir.path().join("RUN"))
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        contents.push(files);
        fs::remove_dir_all(dir.path().join("RUN")).unwrap();
    }
    assert_eq!(contents[0], contents[1]);
}
