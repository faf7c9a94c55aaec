//! End-to-end tests of the command-line binary: exit codes, output
//! formats and byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracbvp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn mixed_eigenvalue_prints_six_digits() {
    let out = run(&["spectrum", "mixed", "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "-0.697078");
}

#[test]
fn green_eval_classical_point() {
    let out = run(&[
        "green", "eval", "--alpha", "2", "--lambda", "0", "--t", "0.3", "--s", "0.8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0.3");
}

#[test]
fn ml_value_and_json() {
    let out = run(&["ml", "--alpha", "1", "--beta", "1", "--x", "1"]);
    assert_eq!(stdout(&out).trim(), "2.71828");
    let out = run(&["--format", "json", "ml", "--alpha", "1", "--beta", "1", "--x", "0"]);
    assert_eq!(stdout(&out).trim(), "{\"value\": 1}");
}

#[test]
fn verify_table1_passes() {
    let out = run(&["verify", "table1", "--tol", "1e-5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 failed"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["spectrum", "mixed"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["spectrum", "mixed", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["solve", "picard", "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_errors_exit_three() {
    // Spectral parameter pinned at the eigenvalue: the kernel is invalid.
    // (An eigenvalue hit maps to a parameter error, exit 2; a numerically
    // failing evaluation maps to 3. Exercise the series cap through an
    // enormous argument.)
    let out = run(&["ml", "--alpha", "1.01", "--beta", "1", "--x", "1e300"]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
}

#[test]
fn scan_csv_format() {
    let out = run(&["spectrum", "scan", "--alpha-range", "1.5:1.5:0.1", "--t0", "0.5"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "# alpha,t0,lambda_bar_1,lambda_star_1,lambda_1"
    );
    let row = lines.next().unwrap();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols.len(), 5);
    assert_eq!(cols[0], "1.50000000000e0");
    // Every numeric field parses back to a double.
    for c in cols {
        c.parse::<f64>().unwrap();
    }
}

#[test]
fn solve_linear_csv_solution() {
    let out = run(&[
        "solve", "linear", "--alpha", "2", "--lambda", "0", "--rhs-expr", "1", "--grid", "5",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("# t,w,u\n"));
    let last = text.lines().last().unwrap();
    let cols: Vec<f64> = last.split(',').map(|c| c.parse().unwrap()).collect();
    assert!((cols[0] - 1.0).abs() < 1e-12);
    assert!((cols[1] - 0.5).abs() < 1e-9);
}

#[test]
fn monotone_reads_candidate_files() {
    let dir = std::env::temp_dir();
    let lower: PathBuf = dir.join("fracbvp_test_lower.csv");
    let upper: PathBuf = dir.join("fracbvp_test_upper.csv");
    std::fs::write(&lower, "# t,w\n0,0\n0.25,0\n0.5,0\n0.75,0\n1,0\n").unwrap();
    std::fs::write(&upper, "0,0\n0.25,0.25\n0.5,0.5\n0.75,0.75\n1,1\n").unwrap();
    let out = run(&[
        "--format",
        "json",
        "solve",
        "monotone",
        "--alpha",
        "2",
        "--lambda",
        "0",
        "--f-expr",
        "1",
        "--lower-file",
        lower.to_str().unwrap(),
        "--upper-file",
        upper.to_str().unwrap(),
        "--grid",
        "65",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["converged"], serde_json::Value::Bool(true));
}

#[test]
fn byte_identical_reruns() {
    let args = [
        vec!["spectrum", "scan", "--alpha-range", "1.2:1.8:0.2", "--t0", "0.4"],
        vec!["green", "scan", "--alpha", "1.5", "--lambda", "-0.3", "--grid", "9"],
        vec![
            "--format", "json", "--seed", "7", "spectrum", "subinterval", "--alpha", "1.6",
            "--t0", "0.3",
        ],
    ];
    for a in &args {
        let first = run(a);
        let second = run(a);
        assert_eq!(first.stdout, second.stdout, "non-deterministic output for {a:?}");
    }
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join("fracbvp_test_out.csv");
    let _ = std::fs::remove_file(&path);
    let out = run(&[
        "--output",
        path.to_str().unwrap(),
        "spectrum",
        "scan",
        "--alpha",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("# alpha,"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn json_report_has_snake_case_keys() {
    let out = run(&[
        "--format", "json", "spectrum", "mixed", "--alpha", "1.5",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in ["alpha", "value", "bracket", "residual", "iterations"] {
        assert!(json.get(key).is_some(), "missing key {key}");
    }
}
