//! End-to-end tests of the `liecontact` binary.

use std::process::{Command, Output};

use liecontact::report::I_FLOAT_TOL;
use serde_json::Value;

fn liecontact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liecontact"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn run_is_deterministic_and_passes() {
    let args = ["run", "--p", "2", "--q", "1", "--seed", "7", "--trials", "5"];
    let a = liecontact(&args);
    let b = liecontact(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let seq = liecontact(&[&args[..], &["--sequential"]].concat());
    assert_eq!(a.stdout, seq.stdout);
    let report: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["passed"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 6);
    assert!(report["records"].as_array().unwrap().iter().all(|r| r["wall_time"].is_null()));
}

#[test]
fn report_written_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["run", "--suite", "algebra", "--trials", "3"];
    let file = liecontact(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(file.status.code(), Some(0));
    assert!(file.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&liecontact(&args)));
}

#[test]
fn timing_fills_wall_time() {
    let out = liecontact(&["run", "--suite", "quaternion", "--trials", "2", "--timing"]);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["records"].as_array().unwrap().iter().all(|r| r["wall_time"].is_number()));
}

#[test]
fn normality_suite_has_one_check() {
    let out = liecontact(&["run", "--p", "3", "--q", "0", "--suite", "normality", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["name"], "codifferential of Ψ_α");
    assert_eq!(records[0]["status"], "pass");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["run", "--suite", "bogus"][..],
        &["run", "--trials", "0"],
        &["run", "--p", "0", "--q", "1"],
        &["run", "--p", "1", "--q", "0", "--suite", "chains"],
        &["chains", "--g", "sideways"],
        &["chains", "--t-min", "2", "--t-max", "1"],
    ] {
        let out = liecontact(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args:?}");
    }
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn chains_csv_shape() {
    let out = liecontact(&["chains", "--g", "identity", "--t-min", "-1", "--t-max", "1", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&out));
    // (2,1): the plane lives in R^7, so 14 span entries plus t.
    assert_eq!(header.len(), 15);
    assert_eq!(header[0], "t");
    assert_eq!(rows.len(), 5);
    let ts: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(ts, [-1.0, -0.5, 0.0, 0.5, 1.0]);
}

#[test]
fn exported_chain_points_are_isotropic() {
    for g in ["identity", "random"] {
        let args = ["chains", "--p", "2", "--q", "2", "--seed", "3", "--g", g, "--steps", "9"];
        let out = liecontact(&args);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(out.stdout, liecontact(&args).stdout);
        let (header, rows) = parse_csv(&stdout(&out));
        let size = (header.len() - 1) / 2;
        let n = size - 4;
        // Signature (4,4) form: -1 pairs coordinates (0, n+2) and (1, n+3);
        // the middle block is diag(1, 1, -1, -1).
        let eps = [1.0, 1.0, -1.0, -1.0];
        let form = |u: &[f64], v: &[f64]| {
            let mut s = -(u[0] * v[n + 2] + u[n + 2] * v[0]) - (u[1] * v[n + 3] + u[n + 3] * v[1]);
            for (k, e) in eps.iter().enumerate() {
                s += e * u[2 + k] * v[2 + k];
            }
            s
        };
        for row in rows {
            // Span entries follow t in row-major order.
            let c1: Vec<f64> = (0..size).map(|r| row[1 + 2 * r]).collect();
            let c2: Vec<f64> = (0..size).map(|r| row[2 + 2 * r]).collect();
            let (c1, c2) = (&c1[..], &c2[..]);
            for (a, b) in [(c1, c1), (c1, c2), (c2, c2)] {
                assert!(form(a, b).abs() < I_FLOAT_TOL, "{g}: residual {}", form(a, b));
            }
        }
    }
}
