use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use trns::io::RunManifest;

fn trns(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trns")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn manifest(dir: &Path) -> RunManifest {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

const SMALL: &str = r#"{
    "nu": 1.0, "N": 16, "dt": 0.01, "seed": 3, "t_end": 0.5,
    "forcing": {"preset": "shear", "k": 4, "amplitude": 1},
    "noise": {"preset": "random", "kmax": 3, "seed": 77, "alpha": 0.5},
    "initial": {"preset": "random", "kmax": 4, "seed": 5, "norm": 1},
    "experiments": {
        "pullback": {"horizons": [0.5, 1], "radii": [1, 10], "seeds": 2},
        "smoothing": {"deltas": [1e-2, 1e-3], "times": [0.25, 0.5], "seeds": 2},
        "absorbing": {"radii": [1, 10], "horizons": [0.5, 1], "seeds": 2},
        "ergodic": {"t_end": 200, "seeds": 2},
        "convergence": {"base_dt": 0.03125, "levels": 3, "t_end": 0.25}
    }
}"#;

#[test]
fn validate_noise_free_preset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"nu": 1.0, "N": 16, "dt": 0.01}"#);
    let out = dir.path().join("out");
    let res = trns(&["validate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("alpha = 1,"), "{stdout}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("assumption.json")).unwrap()).unwrap();
    assert_eq!(report["alpha"], 1.0);
    assert_eq!(manifest(&out).files[0].path, "assumption.json");
}

#[test]
fn taylor_green_default_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tg");
    let res = trns(&["taylor-green", "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(res.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&res.stdout);
    let err: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("max relative error = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(err < 1e-8, "{err}");
    assert!(out.join("taylor_green.csv").exists());
}

#[test]
fn unstable_step_aborts_with_partial_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"nu": 0.01, "N": 32, "dt": 10, "t_end": 10000, "scheme": "etd1",
            "initial": {"preset": "random", "kmax": 8, "seed": 1, "norm": 50}}"#,
    );
    let out = dir.path().join("out");
    let res = trns(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(String::from_utf8_lossy(&res.stderr).contains("non-finite"));
    assert!(out.join("abort.ckpt").exists());
    assert!(out.join("series.csv").exists());
    let m = manifest(&out);
    assert_eq!(m.exit_code, 2);
    assert!(m.files.iter().any(|f| f.path == "abort.txt"));
}

#[test]
fn bad_invocations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(trns(&["validate", "--frobnicate"]).status.code(), Some(1));
    assert_eq!(trns(&["teleport"]).status.code(), Some(1));
    assert_eq!(trns(&["simulate"]).status.code(), Some(1));
    let cfg = write_config(dir.path(), r#"{"nu": 1.0, "N": 7, "dt": 0.01}"#);
    let res = trns(&["validate", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("`N`"));
}

fn csv_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv" || e == "ckpt" || e == "py"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn artifacts_ignore_threads_and_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    for sub in ["simulate", "pullback", "smoothing", "absorbing", "ergodic", "convergence"] {
        let mut runs = Vec::new();
        for (threads, quiet) in [("1", false), ("4", true)] {
            let out = dir.path().join(format!("{sub}-{threads}"));
            let mut args = vec![sub, "--config", &cfg, "--out", out.to_str().unwrap(), "--threads", threads];
            if quiet {
                args.push("--quiet");
            }
            let res = trns(&args);
            assert_eq!(res.status.code(), Some(0), "{sub}: {}", String::from_utf8_lossy(&res.stderr));
            if quiet {
                assert!(res.stderr.is_empty(), "{sub}: {}", String::from_utf8_lossy(&res.stderr));
            }
            let m = manifest(&out);
            let files = csv_bytes(&out);
            assert!(!files.is_empty());
            for (name, bytes) in &files {
                let rec = m.files.iter().find(|f| &f.path == name).unwrap();
                assert_eq!(rec.bytes, bytes.len() as u64);
            }
            runs.push(files);
        }
        assert_eq!(runs[0], runs[1], "{sub}");
    }
}

#[test]
fn seed_override_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (out, seed) in [(&a, None), (&b, Some("41"))] {
        let mut args = vec!["ergodic", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"];
        if let Some(s) = seed {
            args.extend(["--seed", s]);
        }
        assert_eq!(trns(&args).status.code(), Some(0));
    }
    let (ma, mb) = (manifest(&a), manifest(&b));
    assert_eq!(ma.master_seed, 3);
    assert_eq!(mb.master_seed, 41);
    assert_eq!(mb.config["seed"], 41);
    assert_eq!(mb.seeds, vec![41, 42]);
    assert_ne!(fs::read(a.join("ergodic.csv")).unwrap(), fs::read(b.join("ergodic.csv")).unwrap());
}

#[test]
fn simulate_checkpoint_matches_series() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("sim");
    assert_eq!(trns(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]).status.code(), Some(0));
    let ck = trns::io::read_checkpoint(&out.join("final.ckpt")).unwrap();
    assert!((ck.header.t - 0.5).abs() < 1e-12);
    let mut rdr = csv::Reader::from_path(out.join("series.csv")).unwrap();
    let last = rdr.records().last().unwrap().unwrap();
    assert!((last[0].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    assert!(out.join("path.csv").exists());
}
