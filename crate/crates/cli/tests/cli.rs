use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qfp_cli::trace::{read_trace, replay_trace};
use qfp_cli::{parse_problem, write_problem};
use serde_json::Value;
use tempfile::TempDir;

const TWO_HALFSPACES: &str = r#"{"dimension":2,"functions":[{"family":"affine","a":[1,0],"b":0},{"family":"affine","a":[0,1],"b":0}],"x0":[2,3]}"#;

fn qfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_two_halfspaces() {
    let dir = TempDir::new().unwrap();
    let problem = write(&dir, "p.json", TWO_HALFSPACES);
    let out = qfp(&["run", "--problem", s(&problem), "--eps", "1e-6"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "Converged");
    assert_eq!(v["final_point"], serde_json::json!([0.0, 0.0]));
    assert_eq!(v["sweeps"], 1);
    assert_eq!(v["residual"], 0.0);
}

#[test]
fn run_hits_sweep_budget() {
    let dir = TempDir::new().unwrap();
    let problem = write(
        &dir,
        "p.json",
        r#"{"dimension":1,"functions":[{"family":"sqrt_abs_shift","s":1}],"x0":[9]}"#,
    );
    let out = qfp(&["run", "--problem", s(&problem), "--eps", "0", "--max-sweeps", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "MaxSweepsReached");
    assert_eq!(v["sweeps"], 10);
    assert!(v["residual"].as_f64().unwrap() > 0.0);
}

#[test]
fn run_errors_exit_one() {
    let out = qfp(&["run", "--problem", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let dir = TempDir::new().unwrap();
    let no_x0 = write(&dir, "p.json", r#"{"dimension":1,"functions":[{"family":"paper_floor"}]}"#);
    assert_eq!(qfp(&["run", "--problem", s(&no_x0)]).status.code(), Some(1));
    assert_eq!(
        qfp(&["run", "--problem", s(&no_x0), "--x0", "1,2"]).status.code(),
        Some(1)
    );
    assert_eq!(qfp(&["run", "--problem", s(&no_x0), "--x0", "2.5"]).status.code(), Some(0));
    assert_eq!(qfp(&["run"]).status.code(), Some(1));
}

#[test]
fn run_oracle_failure_exits_one() {
    // f/L overflows at x0, so the step is non-finite.
    let dir = TempDir::new().unwrap();
    let problem = write(
        &dir,
        "p.json",
        r#"{"dimension":1,"functions":[{"family":"monotone_composition","inner":{"family":"affine","a":[1],"b":0},"outer":"cube","L":1e-300,"delta":0.01}],"x0":[1e10]}"#,
    );
    let out = qfp(&["run", "--problem", s(&problem)]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "OracleError");
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-finite"));
}

#[test]
fn x0_override_with_negative_values() {
    let dir = TempDir::new().unwrap();
    let problem = write(&dir, "p.json", TWO_HALFSPACES);
    let out = qfp(&["run", "--problem", s(&problem), "--x0", "-1,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["final_point"], serde_json::json!([-1.0, -1.0]));
    assert_eq!(v["sweeps"], 0);
}

#[test]
fn validate_two_halfspaces() {
    let dir = TempDir::new().unwrap();
    let problem = write(&dir, "p.json", TWO_HALFSPACES);
    let out = qfp(&["validate", "--problem", s(&problem), "--region", "-5,5", "--samples", "10000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let reports: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(reports.len(), 10);
    assert!(reports.iter().all(|r| r["passed"] == true && r["samples_tested"].as_u64().unwrap() > 0));
    let props: Vec<&str> = reports[..5].iter().map(|r| r["property"].as_str().unwrap()).collect();
    assert_eq!(props, ["quasiconvex", "star_inequality", "sholder", "konnov", "cutter"]);
}

#[test]
fn validate_detects_understated_modulus() {
    let dir = TempDir::new().unwrap();
    let problem = write(
        &dir,
        "p.json",
        r#"{"dimension":2,"functions":[{"family":"ball","center":[0,0],"radius":1,"L":0.5}]}"#,
    );
    let out = qfp(&["validate", "--problem", s(&problem), "--region", "-3,3"]);
    assert_ne!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let sholder: Value = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .find(|r| r["property"] == "sholder")
        .unwrap();
    assert_eq!(sholder["passed"], false);
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.json", r#"{"dimension":2,"functions":[]}"#);
    assert_eq!(qfp(&["validate", "--problem", s(&empty)]).status.code(), Some(1));

    let ball = write(
        &dir,
        "ball.json",
        r#"{"dimension":2,"functions":[{"family":"ball","center":[0,0],"radius":1}]}"#,
    );
    let far = qfp(&["validate", "--problem", s(&ball), "--region", "5,6,5,6", "--samples", "200"]);
    assert_eq!(far.status.code(), Some(3));
    let bad_region = qfp(&["validate", "--problem", s(&ball), "--region", "1,2,3"]);
    assert_eq!(bad_region.status.code(), Some(1));
}

#[test]
fn trace_file_replays() {
    let dir = TempDir::new().unwrap();
    let problem = write(
        &dir,
        "p.json",
        r#"{"dimension":2,"functions":[{"family":"ball","center":[0,0],"radius":1},{"family":"affine","a":[1,0],"b":0},{"family":"ball","center":[-0.3,0.2],"radius":0.9}],"x0":[3,4],"feasible_reference":[-0.5,0]}"#,
    );
    let trace = dir.path().join("trace.csv");
    let out = qfp(&["run", "--problem", s(&problem), "--eps", "1e-12", "--trace-out", s(&trace)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("sweep,index_i,x1,x2,f_value,residual,dist_to_reference\n"));
    let parsed = parse_problem(&problem).unwrap();
    let rows = read_trace(text.as_bytes(), 2).unwrap();
    let sweeps = rows.last().unwrap().sweep;
    assert_eq!(rows.len(), 1 + sweeps * 4);
    assert_eq!(replay_trace(&parsed.problem, &rows).unwrap(), sweeps * 3);
    // Distances to the reference never increase.
    let dists: Vec<f64> = rows.iter().filter_map(|r| r.dist_to_reference).collect();
    assert!(dists.windows(2).all(|w| w[1] <= w[0] + 1e-12));

    let mut tampered = rows.clone();
    tampered[1].raw_point[0] = "1.0000000000000000e0".into();
    assert!(replay_trace(&parsed.problem, &tampered).is_err());
}

#[test]
fn problem_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let doc = r#"{"dimension":2,"functions":[
        {"family":"affine","a":[0.1,-3.3333333333333335],"b":1e-7,"label":"cut"},
        {"family":"ball","center":[0.30000000000000004,0],"radius":2.5,"L":1.25},
        {"family":"linear_fractional","a":[1,0],"b":-2,"c":[0,1],"d":1,"L":6},
        {"family":"monotone_composition","inner":{"family":"affine","a":[1,1],"b":0},"outer":"paper_floor","L":1.4142135623730951,"delta":1}
    ],"x0":[1,2],"feasible_reference":[-1,-1]}"#;
    let first = parse_problem(&write(&dir, "a.json", doc)).unwrap();
    let written = write_problem(&first.file);
    let second = parse_problem(&write(&dir, "b.json", &written)).unwrap();
    assert_eq!(first.file, second.file);
    assert_eq!(write_problem(&second.file), written);
    for (f, g) in first.problem.functions().iter().zip(second.problem.functions()) {
        assert_eq!(f.holder(), g.holder());
        assert_eq!(f.label(), g.label());
    }
}
