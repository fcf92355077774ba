use std::path::Path;
use std::process::{Command, Output};

fn harmdisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmdisk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_record(o: &Output) -> serde_json::Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

#[test]
fn polygon_square_passes() {
    let o = harmdisk(&["polygon", "2", "1.0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("polygon n=2 R=1"));
    assert_eq!(text.matches(" pass").count(), 3, "{text}");
}

#[test]
fn scan_reports_the_bound() {
    let o = harmdisk(&["scan", "--mu", "mono:1", "--a", "0.5", "--theta", "-2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("max margin 1.000000 at z=0.5"), "{first}");
    let json: serde_json::Value = serde_json::from_str(&text[text.find('{').unwrap()..]).unwrap();
    assert_eq!(json["within_bound"], true);
    assert_eq!(json["orientation_preserving"], true);
}

#[test]
fn scan_with_too_small_radius_is_a_violation() {
    let o = harmdisk(&["scan", "--boundary", "circle", "--R", "0.99"]);
    assert_eq!(o.status.code(), Some(4));
    let rec = error_record(&o);
    assert_eq!(rec["code"], "inequality_violated");
    assert_eq!(rec["witness"], serde_json::json!([0.0, 0.0]));
}

#[test]
fn invalid_inputs_exit_two() {
    for args in [
        &["scan", "--mu", "const:2,0"][..],
        &["scan", "--mu", "poly:0.5,0.6"][..],
        &["trace", "--mu", "zero", "--samples-n", "100"][..],
        &["scan", "--mu", "zero", "--boundary", "circle"][..],
    ] {
        let o = harmdisk(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let rec = error_record(&harmdisk(&["scan", "--mu", "poly:0.5,0.6"]));
    assert_eq!(rec["code"], "validation_failed");
    assert!(rec["witness"].is_array());
}

#[test]
fn impossible_tolerance_is_non_convergence() {
    let o = harmdisk(&[
        "extremal", "--mu", "mono:2", "--abs-tol", "1e-300", "--rel-tol", "0", "--grid-n", "2", "--angles", "4",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_record(&o)["code"], "non_convergence");
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o = harmdisk(&["trace", "--mu", "zero", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_record(&o)["code"], "io");
}

#[test]
fn trace_writes_curve_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let rep = dir.path().join("report.json");
    let o = harmdisk(&[
        "trace", "--mu", "mono:2", "--r", "0.99", "--samples-n", "256",
        "--out", csv.to_str().unwrap(), "--report", rep.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let curve = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(curve.lines().next(), Some("t,re,im"));
    assert_eq!(curve.lines().count(), 257);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report["convex"], true);
    assert_eq!(report["turning_number"], 1);
    assert_eq!(report["count"], 256);
}

#[test]
fn poisson_series_csv() {
    let o = harmdisk(&["poisson", "--boundary", "ellipse:0.5", "--boundary-n", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,re,im"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 16);
    for row in rows {
        let want = match row[0] as i64 {
            1 => 0.75,
            -1 => 0.25,
            _ => 0.0,
        };
        assert!((row[1] - want).abs() < 1e-15 && row[2].abs() < 1e-15);
    }
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.push("--out");
    full.push(&p);
    assert_eq!(harmdisk(&full).status.code(), Some(0), "{args:?}");
    std::fs::read(path).unwrap()
}

#[test]
fn outputs_are_bit_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 3] = [
        &["scan", "--mu", "blaschke:0.3,0,0.7", "--a", "0.3-0.6i", "--theta", "0.9"],
        &["extremal", "--mu", "mono:3", "--format", "json", "--grid-n", "6"],
        &["scan", "--boundary", "twist:0.3", "--format", "json"],
    ];
    for (j, args) in cases.iter().enumerate() {
        let a = run_to(dir.path(), &format!("a{j}"), args);
        let b = run_to(dir.path(), &format!("b{j}"), args);
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}
