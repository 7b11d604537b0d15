use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const FILES: [&str; 9] = [
    "table1.csv",
    "table2.csv",
    "table3.csv",
    "eig_laplacian.csv",
    "eig_bessel.csv",
    "fig4_envelope.csv",
    "helmholtz_k60.csv",
    "helmholtz_k160.csv",
    "summary.json",
];

fn run(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_prolate")).args(args).output().expect("binary runs");
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(run(args).stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes()).records().map(|r| r.unwrap()).collect()
}

#[test]
fn run_all_quick_writes_nine_files_deterministically() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        run(&["run-all", "--quick", "--out", dir.to_str().unwrap()]);
    }
    assert_eq!(fs::read_dir(a.path()).unwrap().count(), 9);
    for name in FILES {
        let x = fs::read(a.path().join(name)).unwrap_or_else(|_| panic!("{name} missing"));
        assert_eq!(x, fs::read(b.path().join(name)).unwrap(), "{name} differs between runs");
        assert!(!x.is_empty());
    }
    for name in &FILES[..8] {
        let text = fs::read_to_string(a.path().join(name)).unwrap();
        assert!(text.starts_with("artifact,c,n,eps,"), "{name} lacks provenance header");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(a.path()).join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["criteria_total"], 9);
    assert_eq!(summary["criteria"].as_array().unwrap().len(), 9);
}

#[test]
fn grid_csv_has_one_row_per_node() {
    let rows = csv_rows(&stdout(&["grid", "--c", "10", "--N", "24"]));
    assert_eq!(rows.len(), 25);
    assert_eq!(&rows[0][4], "0");
    assert_eq!(rows[0][5].parse::<f64>().unwrap(), -1.0);
    let w: f64 = rows.iter().map(|r| r[6].parse::<f64>().unwrap()).sum();
    assert!((w - 2.0).abs() < 1e-6);
}

#[test]
fn krrule_accepts_pi_token() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["krrule", "--c", "120pi"])).unwrap();
    assert_eq!(v["n_star"], 284);
    let rows = csv_rows(&stdout(&["krrule", "--table1"]));
    assert_eq!(rows.len(), 8);
    assert_eq!(&rows[0][2], "24");
}

#[test]
fn diffmat_is_square() {
    let rows = csv_rows(&stdout(&["diffmat", "--c", "4", "--N", "8", "--kind", "dh2"]));
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.len() == 6 + 9 && &r[4] == "Dh2"));
}

#[test]
fn bvp_reports_json() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["bvp", "--scheme", "npcol", "--N", "16", "--iterative"])).unwrap();
    assert_eq!(v["scheme"], "N-PCOL");
    assert!(v["max_error"].as_f64().unwrap() < 1e-4);
    assert!(v["stats"]["iterations"].as_u64().unwrap() <= 8);
}

#[test]
fn helmholtz_reports_error_and_samples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.csv");
    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "helmholtz",
        "--case",
        "piecewise-const",
        "--k",
        "20",
        "--bandwidth",
        "20",
        "--out",
        path.to_str().unwrap(),
    ]))
    .unwrap();
    assert!(v["report"]["max_error"].as_f64().unwrap() < 1e-8);
    assert_eq!(csv_rows(&fs::read_to_string(path).unwrap()).len(), 1000);
}

#[test]
fn project_plateau_is_flat() {
    let rows = csv_rows(&stdout(&["project", "--target", "one", "--c", "1", "--N", "2", "--M", "2,4,8"]));
    let e: Vec<f64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
    assert_eq!(e.len(), 3);
    assert!(e.iter().all(|v| (v / e[0] - 1.0).abs() < 0.01));
}

#[test]
fn bad_arguments_fail() {
    let out = Command::new(env!("CARGO_BIN_EXE_prolate")).args(["grid", "--c", "-3", "--N", "8"]).output().unwrap();
    assert!(!out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_prolate")).args(["grid", "--c", "10", "--N", "4"]).output().unwrap();
    assert!(!out.status.success());
}
