use std::path::Path;
use std::process::{Command, Output};

use fisher_kahler::verify::Report;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fisher-kahler"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn csv_rows(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_owned();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn exponential_geodesic_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let out = run(&["geodesic", "--alpha", "1", "--v0", "1,-1", "--t-end", "1", "--steps", "256", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("closed-form deviation"));
    let (header, rows) = csv_rows(&path);
    assert_eq!(header, "t,p_1,p_2,u_1,u_2");
    assert_eq!(rows.len(), 257);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 1.0);
    // p(1) ∝ (e, 1/e) from the uniform start.
    let e2 = (2.0f64).exp();
    assert!((last[1] - e2 / (e2 + 1.0)).abs() <= 1e-6);
    assert!((last[2] - 1.0 / (e2 + 1.0)).abs() <= 1e-6);
}

#[test]
fn zero_velocity_rows_are_identical() {
    let out = run(&["geodesic", "--alpha", "0.5", "--p0", "0.2,0.3,0.5", "--v0", "0,0,0", "--steps", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').skip(1).collect()).collect();
    assert_eq!(rows.len(), 17);
    assert!(rows.iter().all(|r| *r == rows[0]));
}

#[test]
fn mixture_geodesic_exit_is_reported() {
    let out = run(&["geodesic", "--alpha", "-1", "--v0", "3,-3", "--t-end", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    let t: f64 = err.trim().rsplit(' ').next().unwrap().parse().unwrap();
    // The linear path p_2 = 0.5 (1 - 3t) vanishes at t = 1/3.
    assert!((t - 1.0 / 3.0).abs() < 0.01, "{err}");
}

#[test]
fn pullback_reports() {
    for (mode, bound) in [("analytic", 1e-10), ("fd", 2e-6)] {
        let out = run(&["pullback", "--n", "3", "--samples", "1000", "--mode", mode]);
        assert_eq!(out.status.code(), Some(0), "{mode}");
        let report: Report = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report.suite, "pullback");
        assert_eq!(report.records.len(), 3);
        assert!(report.overall_pass);
        assert!(report.records.iter().all(|r| r.max_abs_error <= bound && r.samples == 1000 && r.n == 3));
    }
}

#[test]
fn verify_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["verify", "--samples", "10", "--n", "2,4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report.overall_pass);
    assert_eq!(report.artifact_version, env!("CARGO_PKG_VERSION"));
    assert!(report.records.iter().all(|r| r.n == 2 || r.n == 4));
}

#[test]
fn natgrad_converges_and_exits() {
    let out = run(&["natgrad", "--target", "0.75,0.25", "--start", "0.5,0.5", "--step", "0.25", "--iters", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("iter,f,p_1,p_2\n"));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 200.0);
    assert!(last[1] < 1e-12);

    let out = run(&["natgrad", "--target", "0.01,0.01,0.98", "--start", "0.98,0.01,0.01", "--step", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        vec!["verify", "--samples", "0"],
        vec!["verify", "--n", "1"],
        vec!["verify", "--n", "65"],
        vec!["verify", "--samples", "2", "--out", "/nonexistent-dir/r.json"],
        vec!["geodesic", "--p0", "0.5,0.6", "--v0", "1,-1"],
        vec!["geodesic", "--v0", "1,1"],
        vec!["geodesic", "--v0", "1,-1", "--steps", "4"],
        vec!["natgrad", "--n", "3", "--target", "0.5,0.5"],
        vec!["natgrad", "--target", "0.5,0.5", "--step", "0"],
        vec!["pullback", "--mode", "exact"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}
