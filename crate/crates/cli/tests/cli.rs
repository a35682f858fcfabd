use std::fs;
use std::path::Path;
use std::process::Command;

use lcverify_cli::{run_with, EXIT_INVALID, EXIT_PASS, EXIT_VIOLATION};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lcverify").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn rows(stdout: &str) -> Vec<Value> {
    serde_json::from_str::<Value>(stdout)
        .unwrap()
        .as_array()
        .unwrap()
        .clone()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn check_log_concave_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"{"offset": 0, "weights": ["1/4", "1/2", "1/4"], "exact": true}"#,
    );
    let (code, out, _) = run(&["check", "--pmf", &f]);
    assert_eq!(code, EXIT_PASS);
    let rows = rows(&out);
    assert_eq!(rows[0]["check"], "log_concave");
    assert_eq!(rows[0]["note"], "log-concave: true");
    assert_eq!(rows[1]["details"]["dof"], "3");
}

#[test]
fn check_non_log_concave_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", r#"{"weights": [1, 0.2, 1]}"#);
    let (code, out, _) = run(&["check", "--pmf", &f]);
    assert_eq!(code, EXIT_VIOLATION);
    assert_eq!(rows(&out)[0]["pass"], false);
}

#[test]
fn check_potential_convexity() {
    let dir = tempfile::tempdir().unwrap();
    let convex = write(
        dir.path(),
        "v.json",
        r#"{"a": 0, "values": [3, 2, "4/3", 2]}"#,
    );
    let (code, out, _) = run(&["check", "--potential", &convex]);
    assert_eq!(code, EXIT_PASS);
    let rows = rows(&out);
    assert_eq!(rows[0]["note"], "convex: true");
    assert_eq!(rows[1]["details"]["dof"], "4");
    let concave = write(dir.path(), "w.json", r#"{"a": 0, "values": [0, 1, 0]}"#);
    assert_eq!(run(&["check", "--potential", &concave]).0, EXIT_VIOLATION);
}

#[test]
fn dof_prints_minimal_cover() {
    let dir = tempfile::tempdir().unwrap();
    let v = write(
        dir.path(),
        "v.json",
        r#"{"a": 0, "values": [3, 2, "4/3", 2]}"#,
    );
    let (code, out, _) = run(&["dof", "--potential", &v]);
    assert_eq!(code, EXIT_PASS);
    let pieces: Vec<(String, String)> = rows(&out)
        .iter()
        .filter(|r| r["check"] == "cover_piece")
        .map(|r| {
            (
                r["lhs"].as_str().unwrap().to_owned(),
                r["rhs"].as_str().unwrap().to_owned(),
            )
        })
        .collect();
    assert_eq!(
        pieces,
        vec![("-1".into(), "3".into()), ("2/3".into(), "0".into())]
    );
}

#[test]
fn min_entropy_geometric_ratio() {
    let (code, out, _) = run(&[
        "verify",
        "min-entropy",
        "--family",
        "geometric",
        "--theta",
        "0.5",
    ]);
    assert_eq!(code, EXIT_PASS);
    let ratio = rows(&out)[0]["details"]["ratio"].as_f64().unwrap();
    assert!((ratio - 0.75).abs() < 1e-6, "{ratio}");
}

#[test]
fn min_entropy_rejects_non_log_concave() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", r#"{"weights": [1, 0.2, 1]}"#);
    let (code, _, err) = run(&["verify", "min-entropy", "--pmf", &f]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("log-concave"), "{err}");
}

#[test]
fn entropy_table() {
    let (code, out, _) = run(&[
        "entropy",
        "--family",
        "bernoulli",
        "--p",
        "0.5",
        "--alpha",
        "1,2,inf",
    ]);
    assert_eq!(code, EXIT_PASS);
    let rows = rows(&out);
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!((r["lhs"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((r["rhs"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    }
}

#[test]
fn rational_flags_route_to_exact_mode() {
    let (code, out, _) = run(&[
        "verify", "e4", "--p1", "5/3", "--p2", "500", "--N", "9", "--K", "1",
    ]);
    assert_eq!(code, EXIT_PASS);
    let r = &rows(&out)[0];
    assert_eq!(r["mode"], "exact");
    assert_eq!(
        r["details"]["weakened"],
        "-25120067916073366567/476837158203125000000"
    );
    let (code, out, _) = run(&[
        "verify", "e4", "--p1", "1.5", "--p2", "2.5", "--N", "3", "--K", "2",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(rows(&out)[0]["mode"], "float");
}

#[test]
fn e5_point_and_grid() {
    let (code, out, _) = run(&[
        "verify", "e5", "--N", "1", "--K", "1", "--x", "1", "--y", "1",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(rows(&out)[0]["lhs"], "66");
    let grid = r#"{"grids": {"N": [1, 2], "K": [1, 3], "x": {"start": "1/2", "stop": "2", "step": "1/2"}, "y": ["1/3", 3]}}"#;
    let (code, out, _) = run(&["verify", "e5", "--grid", grid]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(rows(&out).len(), 2 * 2 * 4 * 2);
}

#[test]
fn e4_grid() {
    let grid =
        r#"{"grids": {"p1": ["1", "5/4", "2"], "p2": ["1", "500"], "N": [1, 4], "K": [1, 4]}}"#;
    let (code, out, _) = run(&["verify", "e4", "--grid", grid]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(rows(&out).len(), 3 * 2 * 2 * 2);
}

#[test]
fn appendix_rows() {
    let (code, out, _) = run(&["verify", "appendix", "--max", "40"]);
    assert_eq!(code, EXIT_PASS);
    let rows = rows(&out);
    assert!(rows.len() >= 7 * 40, "{}", rows.len());
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn other_verbs_pass() {
    for args in [
        vec!["verify", "epi", "--trials", "20"],
        vec![
            "verify",
            "epi",
            "--trials",
            "5",
            "--alpha",
            "1.5,2",
            "--improved",
        ],
        vec![
            "verify", "bounds", "--family", "binomial", "--n", "10", "--p", "1/3",
        ],
        vec![
            "verify",
            "concentration",
            "--family",
            "poisson",
            "--rate",
            "3",
        ],
        vec!["verify", "case1", "--trials", "50"],
        vec![
            "verify",
            "case1",
            "--family",
            "geometric",
            "--theta",
            "0.25",
        ],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, EXIT_PASS, "{args:?}: {err}");
    }
}

#[test]
fn search_reports_per_source_minimum() {
    let grid = r#"{"grids": {"theta": [0.5, 0.1, 0.01]}, "corpus": {"size": 200}}"#;
    let (code, out, _) = run(&["search", "--grid", grid]);
    assert_eq!(code, EXIT_PASS);
    let rows = rows(&out);
    let checks: Vec<&str> = rows.iter().map(|r| r["check"].as_str().unwrap()).collect();
    assert_eq!(checks, ["search_corpus", "search_geometric"]);
    assert_eq!(rows[1]["params"]["theta"].as_f64(), Some(0.01));
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{not json");
    for args in [
        vec!["check", "--pmf", bad.as_str()],
        vec!["check", "--pmf", "/nonexistent/file.json"],
        vec![
            "verify",
            "bounds",
            "--family",
            "geometric",
            "--theta",
            "0.5",
            "--alpha",
            "1",
        ],
        vec![
            "verify", "e5", "--N", "1", "--K", "1", "--x", "0", "--y", "1",
        ],
        vec!["verify", "min-entropy", "--family", "nope"],
        vec!["search", "--grid", r#"{"tol": 0, "corpus": {"size": 1}}"#],
        vec!["check"],
        vec!["frobnicate"],
        vec![
            "entropy",
            "--family",
            "geometric",
            "--theta",
            "0.5",
            "--tol",
            "-1",
        ],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, EXIT_INVALID, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn csv_output_has_fixed_header() {
    let (code, out, _) = run(&["verify", "appendix", "--max", "2", "--format", "csv"]);
    assert_eq!(code, EXIT_PASS);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("check,params,lhs,rhs,slack,pass,tol,mode,note")
    );
    assert_eq!(lines.count(), 7 * 2 + 2 + 2);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |out: &Path, jobs: &str| {
        vec![
            "verify".to_owned(),
            "epi".into(),
            "--trials".into(),
            "30".into(),
            "--seed".into(),
            "7".into(),
            "--jobs".into(),
            jobs.into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let run_owned = |v: Vec<String>| {
        let mut sink = Vec::new();
        let mut err = Vec::new();
        run_with(
            std::iter::once("lcverify".to_owned()).chain(v),
            &mut sink,
            &mut err,
        )
    };
    assert_eq!(run_owned(args(&a, "1")), EXIT_PASS);
    assert_eq!(run_owned(args(&b, "4")), EXIT_PASS);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_lcverify");
    let ok = Command::new(bin)
        .args([
            "verify",
            "min-entropy",
            "--family",
            "geometric",
            "--theta",
            "0.5",
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_PASS));
    let first = String::from_utf8(ok.stdout).unwrap();
    let again = Command::new(bin)
        .args([
            "verify",
            "min-entropy",
            "--family",
            "geometric",
            "--theta",
            "0.5",
        ])
        .output()
        .unwrap();
    assert_eq!(first, String::from_utf8(again.stdout).unwrap());
    let bad = Command::new(bin)
        .args(["verify", "appendix", "--max", "0"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INVALID));
    assert!(!bad.stderr.is_empty());
}
