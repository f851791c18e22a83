use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn gendiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gendiv")).args(args).output().expect("gendiv runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gendiv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn fixture_exit_codes() {
    let expected = [
        ("node.gd", 0),
        ("plane.gd", 0),
        ("curve.gd", 0),
        ("localization.gd", 0),
        ("nonflat.gd", 0),
        ("stack.gd", 0),
        ("finite_field.gd", 0),
        ("cocycle_fail.gd", 1),
        ("saturation_bound.gd", 2),
    ];
    for (name, code) in expected {
        let out = gendiv(&["check", fixture(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(code), "{}\n{}", name, stdout(&out));
        assert!(stdout(&out).lines().last().unwrap().starts_with("SUMMARY "));
    }
}

#[test]
fn text_report_lines() {
    let out = stdout(&gendiv(&["check", fixture("cocycle_fail.gd").to_str().unwrap()]));
    assert!(out.contains("CHECK cocycle FAIL composite=4"), "{}", out);
    let out = stdout(&gendiv(&["check", fixture("saturation_bound.gd").to_str().unwrap()]));
    assert!(out.contains(" UNKNOWN "), "{}", out);
    assert!(out.contains("SUMMARY pass=0 fail=0 unknown=1 error=0"), "{}", out);
}

#[test]
fn json_is_deterministic_across_job_counts() {
    for name in ["node.gd", "curve.gd", "stack.gd"] {
        let path = fixture(name);
        let a = stdout(&gendiv(&["check", "--json", path.to_str().unwrap()]));
        let b = stdout(&gendiv(&["check", "--json", "--jobs", "1", path.to_str().unwrap()]));
        let c = stdout(&gendiv(&["check", "--json", "--jobs", "4", path.to_str().unwrap()]));
        assert_eq!(a, b, "{}", name);
        assert_eq!(a, c, "{}", name);
    }
}

#[test]
fn json_keys_are_sorted() {
    let out = stdout(&gendiv(&["check", "--json", fixture("node.gd").to_str().unwrap()]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(v["tool"], "gendiv");
    for e in v["entries"].as_array().unwrap() {
        assert!(!e["certificates"].as_array().unwrap().is_empty());
    }
}

#[test]
fn recheck_accepts_fresh_reports() {
    for name in ["node.gd", "curve.gd", "finite_field.gd", "localization.gd"] {
        let report = stdout(&gendiv(&["check", "--json", fixture(name).to_str().unwrap()]));
        let path = scratch(&format!("{}.json", name), &report);
        let out = gendiv(&["recheck", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).contains("failed=0"));
    }
}

#[test]
fn recheck_rejects_tampered_certificates() {
    let report = stdout(&gendiv(&["check", "--json", fixture("node.gd").to_str().unwrap()]));
    let mut v: Value = serde_json::from_str(&report).unwrap();
    let entry = v["entries"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|e| e["certificates"].as_array().unwrap().iter().any(|c| c["type"] == "membership"))
        .expect("a membership certificate");
    let cert = entry["certificates"].as_array_mut().unwrap().iter_mut().find(|c| c["type"] == "membership").unwrap();
    cert["coefficients"][0] = Value::String("x + 7".into());
    let path = scratch("tampered.json", &serde_json::to_string(&v).unwrap());
    let out = gendiv(&["recheck", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAILED"), "{}", stdout(&out));

    let mut v: Value = serde_json::from_str(&report).unwrap();
    v["entries"][0]["verdict"] = Value::String("FAIL".into());
    let path = scratch("flipped.json", &serde_json::to_string(&v).unwrap());
    assert_eq!(gendiv(&["recheck", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn recheck_rejects_garbage() {
    let path = scratch("garbage.json", "{ not json");
    let out = gendiv(&["recheck", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn fmt_is_a_fixed_point_and_preserves_results() {
    for name in ["node.gd", "curve.gd", "stack.gd", "localization.gd"] {
        let once = stdout(&gendiv(&["fmt", fixture(name).to_str().unwrap()]));
        let path = scratch(&format!("fmt-{}", name), &once);
        let twice = stdout(&gendiv(&["fmt", path.to_str().unwrap()]));
        assert_eq!(once, twice, "{}", name);
        let original = stdout(&gendiv(&["check", fixture(name).to_str().unwrap()]));
        let formatted = stdout(&gendiv(&["check", path.to_str().unwrap()]));
        assert_eq!(original, formatted, "{}", name);
    }
}

#[test]
fn syntax_errors_carry_positions() {
    let path = scratch("bad.gd", "field F = Q\nring A = F[x, y] / (x*y\n");
    let out = gendiv(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error: 2:"), "{}", stderr(&out));

    let path = scratch("unknown.gd", "ring A = Q[x]\nassert reflexive M\n");
    let out = gendiv(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("2:"), "{}", stderr(&out));
}

#[test]
fn zero_rings_are_rejected() {
    let path = scratch("zero.gd", "ring A = Q[x] / (1)\n");
    let out = gendiv(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("improper relations ideal"), "{}", stderr(&out));
}

#[test]
fn bound_flag_reaches_bounded_searches() {
    let path = fixture("saturation_bound.gd");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("bound 0"));
    let doc = scratch("sat.gd", &text.replace(" bound 0", ""));
    let low = gendiv(&["check", "--bound", "0", doc.to_str().unwrap()]);
    assert_eq!(low.status.code(), Some(2), "{}", stdout(&low));
    let high = gendiv(&["check", "--bound", "4", doc.to_str().unwrap()]);
    assert_eq!(high.status.code(), Some(0), "{}", stdout(&high));
}

#[test]
fn missing_files_are_input_errors() {
    let out = gendiv(&["check", "/nonexistent/doc.gd"]);
    assert_eq!(out.status.code(), Some(3));
}
