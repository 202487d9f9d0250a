use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qnr_core::io::{matrix_from_json, read_boundary, read_sweep, Report};
use serde_json::Value;
use tempfile::TempDir;

fn qnr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnr"))
        .args(args)
        .env("QNR_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const EXAMPLE: &str = r#"{"n": 2, "entries": [[[1, 0], [2, 0]], [[0, 0], [-1, 0]]]}"#;
const DIAG: &str = r#"{"n": 2, "entries": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]}"#;

#[test]
fn analyze_quadratic_example() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.json", EXAMPLE);
    let report_path = dir.path().join("r.json");
    let boundary = dir.path().join("b.csv");
    let out = qnr(&[
        "analyze",
        s(&input),
        "--oracle",
        "500",
        "--report",
        s(&report_path),
        "--boundary",
        s(&boundary),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let report = Report::from_json(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let comp = report.computation.unwrap();
    assert_eq!(comp.grid, 720);
    assert!(comp.hausdorff_vs_prediction.unwrap() <= 1e-8);
    assert!(comp.oracle.unwrap().max_outer_excess <= 1e-12);
    let pred = report.signature.unwrap().prediction.unwrap();
    let mut foci: Vec<f64> = pred.foci.iter().map(|f| f[0]).collect();
    foci.sort_by(f64::total_cmp);
    assert_eq!(foci, vec![-1.0, 1.0]);
    assert!((pred.major - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(pred.closed, "yes");

    let region = read_boundary(std::fs::File::open(&boundary).unwrap()).unwrap();
    assert_eq!(region.grid_size(), 720);
}

#[test]
fn analyze_non_quadratic() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "a.json",
        r#"{"n": 3, "entries": [[[1, 0], [2, 1], [0, 0]], [[0, 0], [3, 0], [1, 0]], [[1, 1], [0, 0], [-2, 0]]]}"#,
    );
    let out = qnr(&["analyze", s(&input), "--no-timestamp"]);
    assert_eq!(code(&out), 2);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["computation"]["grid"].is_u64());
    assert_eq!(v["signature"]["quadratic"], Value::Bool(false));
    assert!(v["signature"].get("prediction").is_none());
}

#[test]
fn analyze_malformed_input() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.json", "{\"n\": 2, \"entries\": [");
    let out = qnr(&["analyze", s(&input)]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
    let out = qnr(&["analyze", "/nonexistent/matrix.json"]);
    assert_eq!(code(&out), 1);
    let out = qnr(&["analyze"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn gen_composition() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.json");
    let out = qnr(&["gen", "composition", "--p", "0.5", "--size", "64", "--out", s(&path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let m = matrix_from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(m.dim(), 64);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let norm = v["predictor"]["norm"].as_f64().unwrap();
    assert!((norm - 3f64.sqrt()).abs() < 1e-15);
    assert_eq!(v["predictor"]["formula"], "composition-hardy");
}

#[test]
fn gen_cauchy_circle() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("s.json");
    let out = qnr(&["gen", "cauchy-circle", "--size", "32", "--out", s(&path)]);
    assert_eq!(code(&out), 0);
    let m = matrix_from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for i in 0..32 {
        for j in 0..32 {
            let z = m[(i, j)];
            if i == j {
                assert!(z.re == 1.0 || z.re == -1.0);
                assert_eq!(z.im, 0.0);
            } else {
                assert_eq!(z.norm(), 0.0);
            }
        }
    }
}

#[test]
fn gen_canonical() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("q.json");
    let out = qnr(&["gen", "canonical", "--lambda", "1,-1", "--x", "1", "--seed", "7", "--out", s(&path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let m = matrix_from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(m.dim(), 2);
    // unitarily similar to [[1, 2], [0, -1]]
    assert!((m.frobenius_norm() - 6f64.sqrt()).abs() < 1e-12);
    assert!(m.trace().norm() < 1e-12);
    assert!(m[(1, 0)].norm() > 1e-6, "conjugation applied");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let major = v["signature"]["prediction"]["major"].as_f64().unwrap();
    assert!((major - 2.0 * 2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn gen_rejects_bad_parameters() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("x.json");
    assert_eq!(code(&qnr(&["gen", "composition", "--p", "1.5", "--size", "4", "--out", s(&path)])), 1);
    assert_eq!(code(&qnr(&["gen", "hankel", "--beta", "0", "--size", "4", "--out", s(&path)])), 1);
    assert_eq!(code(&qnr(&["gen", "canonical", "--lambda", "1", "--x", "1", "--out", s(&path)])), 1);
    assert_eq!(code(&qnr(&["gen", "canonical", "--lambda", "1,-1", "--x", "-1", "--out", s(&path)])), 1);
    assert_eq!(code(&qnr(&["gen", "mystery", "--size", "4", "--out", s(&path)])), 1);
}

#[test]
fn sweep_composition() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = qnr(&["sweep", "composition", "--p", "0.5", "--sizes", "32,64,128,256", "--out", s(&path)]);
    assert_eq!(code(&out), 0);
    assert!(out.stderr.is_empty(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_sweep(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.windows(2).all(|w| w[0].norm <= w[1].norm));
    assert!((rows[3].norm - 3f64.sqrt()).abs() < 0.05);
}

#[test]
fn sweep_hankel_sections_increase() {
    let out = qnr(&["sweep", "hankel", "--beta", "0.25", "--sizes", "32,64,128"]);
    assert_eq!(code(&out), 0);
    let rows = read_sweep(out.stdout.as_slice()).unwrap();
    assert!(rows.windows(2).all(|w| w[0].norm <= w[1].norm));
    assert!(rows.iter().all(|r| r.norm <= (PI / 4.0).sin() + 1e-9));
    assert!((rows[0].major_predicted.unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn sweep_cauchy_circle() {
    let out = qnr(&["sweep", "cauchy-circle", "--sizes", "8,16,32"]);
    assert_eq!(code(&out), 0);
    let rows = read_sweep(out.stdout.as_slice()).unwrap();
    assert!(rows.iter().all(|r| r.norm == 1.0));
    assert_eq!(code(&qnr(&["sweep", "cauchy-circle", "--sizes", "8"])), 1);
    assert_eq!(code(&qnr(&["sweep", "spiral", "--sizes", "8,16"])), 1);
}

#[test]
fn cnum_segment() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", DIAG);
    let boundary = dir.path().join("b.csv");
    let out = qnr(&["cnum", s(&input), "--c", "1,-1", "--angles", "8", "--boundary", s(&boundary)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let region = read_boundary(std::fs::File::open(&boundary).unwrap()).unwrap();
    // h(psi) = 2 |cos psi| for the segment [-2, 2]
    for (psi, h) in region.angles.iter().zip(&region.support_values) {
        assert!((h - 2.0 * psi.cos().abs()).abs() < 1e-12);
    }
    let report = Report::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.c, Some(vec![1.0, -1.0]));
    assert!(report.sandwich.unwrap().outer_violation <= 1e-9);
}

#[test]
fn cnum_drops_zero_coefficients() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", DIAG);
    let out = qnr(&["cnum", s(&input), "--c", "1,0,-1"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn cnum_too_many_coefficients() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", DIAG);
    assert_eq!(code(&qnr(&["cnum", s(&input), "--c", "1,2,3"])), 3);
    assert_eq!(code(&qnr(&["cnum", s(&input), "--c", "one"])), 1);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.json", EXAMPLE);
    let args = ["analyze", s(&input), "--oracle", "3000", "--seed", "11", "--no-timestamp"];
    let first = qnr(&args);
    let second = Command::new(env!("CARGO_BIN_EXE_qnr")).args(args).env("QNR_THREADS", "3").output().unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert!(!String::from_utf8_lossy(&first.stdout).contains("timestamp"));
    let stamped = qnr(&["analyze", s(&input)]);
    assert!(String::from_utf8_lossy(&stamped.stdout).contains("timestamp"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", DIAG);
    let config = write(&dir, "qnr.toml", "angles = 90\nc = [1.0, -1.0]\nno-timestamp = true\n");
    let out = qnr(&["--config", s(&config), "cnum", s(&input)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = Report::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.computation.unwrap().grid, 90);
    assert_eq!(report.provenance.timestamp, None);

    let out = qnr(&["--config", s(&config), "cnum", s(&input), "--angles", "16", "--c", "2"]);
    let report = Report::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.computation.unwrap().grid, 16);
    assert_eq!(report.c, Some(vec![2.0]));

    let bad = write(&dir, "bad.toml", "colour = 3\n");
    assert_eq!(code(&qnr(&["--config", s(&bad), "cnum", s(&input)])), 1);
}
