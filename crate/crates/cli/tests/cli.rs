use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn foliate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foliate")).args(args).output().expect("binary runs")
}

fn report(dir: &Path, name: &str, args: &[&str]) -> (i32, Value) {
    let out = dir.join(name);
    let mut full = args.to_vec();
    let path = out.to_str().unwrap();
    full.extend(["--quiet", "--out", path]);
    let status = foliate(&full).status.code().expect("exit code");
    let json = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    (status, json)
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hopf", "--theta", "1,1,0.5", "--samples", "12", "--seed", "3"];
    let (s1, a) = report(dir.path(), "a.json", &args);
    let (s2, b) = report(dir.path(), "b.json", &args);
    assert_eq!((s1, s2), (0, 0));
    assert!(a["timing"]["elapsed_s"].is_number());
    assert_eq!(without_timing(a), without_timing(b));
}

#[test]
fn report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let (status, v) = report(dir.path(), "v.json", &["verify", "--trials", "10", "--q", "4"]);
    assert_eq!(status, 0);
    for key in ["config", "checks", "findings", "summary", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "lhs", "rhs", "gap", "tol", "pass"] {
            assert!(c.get(key).is_some(), "check missing {key}: {c}");
        }
        assert_eq!(c["pass"], Value::Bool(true), "{c}");
    }
    for f in v["findings"].as_array().unwrap() {
        for key in ["kind", "detail", "values"] {
            assert!(f.get(key).is_some(), "finding missing {key}: {f}");
        }
    }
    assert_eq!(v["summary"]["status"], "ok");
    assert_eq!(v["summary"]["checks"].as_u64().unwrap() as usize, checks.len());
}

#[test]
fn injected_fault_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let (status, v) = report(dir.path(), "f.json", &["verify", "--trials", "5", "--q", "4", "--inject-fault"]);
    assert_eq!(status, 1);
    assert_ne!(v["summary"]["status"], "ok");
    assert!(v["summary"]["gating_failures"].as_u64().unwrap() >= 1);
}

#[test]
fn bound_violations_are_findings() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bounds", "--theorem", "3.1", "--theta", "1,0.3,0.3", "--p", "2", "--samples", "10"];
    let (status, v) = report(dir.path(), "b.json", &args);
    assert_eq!(status, 0);
    let kinds: Vec<&str> = v["findings"].as_array().unwrap().iter().map(|f| f["kind"].as_str().unwrap()).collect();
    let gap = v["checks"][0]["gap"].as_f64().unwrap();
    assert_eq!(gap < -1e-9, kinds.contains(&"bound-violated"));
}

#[test]
fn sharp_case_on_s5() {
    let dir = tempfile::tempdir().unwrap();
    let (status, v) = report(
        dir.path(),
        "s.json",
        &["bounds", "--theorem", "4.1", "--m", "3", "--p", "2", "--samples", "4"],
    );
    assert_eq!(status, 0);
    let c = &v["checks"][0];
    assert!((c["lhs"].as_f64().unwrap() - 36.0).abs() < 1e-9);
    assert!((c["rhs"].as_f64().unwrap() - 36.0).abs() < 1e-9);
}

#[test]
fn hypothesis_and_usage_errors_exit_2() {
    for args in [
        &["bounds", "--theorem", "4.1", "--m", "3", "--p", "3"][..],
        &["bounds", "--theorem", "9.9", "--m", "3"][..],
        &["hopf", "--theta", "0.5,1"][..],
    ] {
        let out = foliate(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{args:?}");
    }
}

#[test]
fn text_summary_goes_to_stdout() {
    let out = foliate(&["hopf", "--m", "2", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("frame orthonormality"), "{text}");
}
