use std::io::Write;
use std::process::{Command, Output};

use clonecheck_core::states::NamedQubit;
use clonecheck_core::teleport::run_teleport;
use serde_json::Value;

fn clonecheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clonecheck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn assert_clean_failure(out: &Output) {
    assert_eq!(code(out), 1, "stderr: {}", stderr(out));
    assert!(!stderr(out).contains("panicked"), "{}", stderr(out));
}

#[test]
fn teleport_zero_reaches_b_only() {
    let out = clonecheck(&["teleport", "--state", "zero", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["dist_b"].as_f64().unwrap() <= 1e-9);
    assert!((v["dist_c"].as_f64().unwrap() - 0.5).abs() <= 1e-9);
    assert_eq!(v["eq_4_1_holds"], true);
    assert_eq!(v["eq_4_2_holds"], false);
}

#[test]
fn teleport_mixed_is_boundary_case() {
    let out = clonecheck(&["teleport", "--state", "mixed"]);
    assert_eq!(code(&out), 2);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("boundary case"), "{text}");
}

#[test]
fn teleport_rejects_bad_trace() {
    let f = write_temp(r#"{"dim": 2, "kind": "matrix", "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#);
    let out = clonecheck(&["teleport", "--state-file", f.path().to_str().unwrap()]);
    assert_clean_failure(&out);
    assert!(stderr(&out).contains("trace"), "{}", stderr(&out));
}

#[test]
fn teleport_rejects_non_hermitian_and_unknown_names() {
    let f = write_temp(
        r#"{"dim": 2, "kind": "matrix", "matrix": [[[0.5,0],[0.5,0]],[[0,0],[0.5,0]]]}"#,
    );
    let out = clonecheck(&["teleport", "--state-file", f.path().to_str().unwrap()]);
    assert_clean_failure(&out);
    assert!(stderr(&out).contains("Hermitian"), "{}", stderr(&out));

    assert_clean_failure(&clonecheck(&["teleport", "--state", "bogus"]));
    assert_clean_failure(&clonecheck(&["teleport"]));
    assert_clean_failure(&clonecheck(&[
        "teleport",
        "--state",
        "zero",
        "--state-file",
        "x.json",
    ]));
}

#[test]
fn malformed_json_never_panics() {
    for body in [
        "",
        "{",
        "[1,2]",
        r#"{"dim": 2}"#,
        r#"{"dim": 2, "kind": "named", "name": "zero", "x": 1}"#,
    ] {
        let f = write_temp(body);
        let p = f.path().to_str().unwrap();
        assert_clean_failure(&clonecheck(&["teleport", "--state-file", p]));
        assert_clean_failure(&clonecheck(&["audit", "--state-file", p]));
        assert_clean_failure(&clonecheck(&["channel-check", p]));
    }
}

#[test]
fn noclone_batch_succeeds() {
    let out = clonecheck(&[
        "noclone",
        "--instances",
        "100",
        "--seed",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json(&out);
    assert!(v["min_defect"].as_f64().unwrap() >= 1e-6);
    let rows = v["instances"].as_array().unwrap();
    assert_eq!(rows.len(), 100);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(r["index"].as_u64().unwrap() as usize, k);
    }
}

#[test]
fn noclone_is_deterministic() {
    let a = clonecheck(&["noclone", "--instances", "1", "--seed", "1"]);
    let b = clonecheck(&["noclone", "--instances", "1", "--seed", "1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn noclone_usage_errors() {
    assert_clean_failure(&clonecheck(&["noclone", "--instances", "0", "--seed", "1"]));
    assert_clean_failure(&clonecheck(&["noclone", "--instances", "0"]));
    assert_clean_failure(&clonecheck(&["noclone", "--instances", "3"]));
    assert_clean_failure(&clonecheck(&[
        "noclone",
        "--instances",
        "-3",
        "--seed",
        "1",
    ]));
}

#[test]
fn audit_timelike_pair_has_no_window() {
    let out = clonecheck(&[
        "audit", "--state", "zero", "--eI", "1,0", "--eII", "2,0", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["window"].is_null());
    assert_eq!(v["verdict"], "no_contradiction");
    let notes = v["notes"].as_array().unwrap();
    assert!(notes
        .iter()
        .any(|n| n.as_str().unwrap().contains("No reordering frame exists")));
}

#[test]
fn audit_default_pair_reorders() {
    let out = clonecheck(&["audit", "--state", "plus", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let w = v["window"].as_array().unwrap();
    assert!(w[0].as_f64().unwrap() < w[1].as_f64().unwrap());
    assert_eq!(v["eq_3_7_pattern"], true);
}

#[test]
fn audit_mixed_is_forbidden_pattern() {
    let out = clonecheck(&["audit", "--state", "mixed", "--format", "json"]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["verdict"], "forbidden_pattern");
    assert_eq!(v["boundary_case"], true);
}

#[test]
fn audit_rejects_bad_events() {
    assert_clean_failure(&clonecheck(&["audit", "--state", "zero", "--eI", "1"]));
    assert_clean_failure(&clonecheck(&["audit", "--state", "zero", "--eI", "a,b"]));
    assert_clean_failure(&clonecheck(&[
        "audit", "--state", "zero", "--eI", "1,0", "--eII", "1,0",
    ]));
}

#[test]
fn audit_accepts_negative_coordinates() {
    let out = clonecheck(&[
        "audit", "--state", "zero", "--eI", "-1,-2", "--eII", "1,2.5",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn exported_channel_checks_out() {
    let export = clonecheck(&["export-channel"]);
    assert_eq!(code(&export), 0);
    let f = write_temp(std::str::from_utf8(&export.stdout).unwrap());
    let out = clonecheck(&[
        "channel-check",
        f.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json(&out);
    assert!(v["partition_residual"].as_f64().unwrap() <= 1e-10);
    assert!(v["trace_preservation_residual"].as_f64().unwrap() <= 1e-10);
    assert!(v["choi_min_eigenvalue"].as_f64().unwrap() >= -1e-10);
    assert_eq!(v["terms"], 4);
}

#[test]
fn channel_check_rejects_double_identity() {
    let id = "[[[1,0],[0,0]],[[0,0],[1,0]]]";
    let term = format!(r#"{{"unitary": {id}, "projector": {id}, "side": "UP"}}"#);
    let f = write_temp(&format!(r#"{{"dim": 2, "terms": [{term}, {term}]}}"#));
    let out = clonecheck(&["channel-check", f.path().to_str().unwrap()]);
    assert_clean_failure(&out);
    assert!(
        stderr(&out).contains("sum to the identity"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn channel_check_rejects_empty_terms() {
    let f = write_temp(r#"{"dim": 2, "terms": []}"#);
    let out = clonecheck(&["channel-check", f.path().to_str().unwrap()]);
    assert_clean_failure(&out);
    assert!(stderr(&out).contains("no terms"), "{}", stderr(&out));
}

#[test]
fn channel_check_rejects_non_unitary() {
    let id = "[[[1,0],[0,0]],[[0,0],[1,0]]]";
    let bad = "[[[2,0],[0,0]],[[0,0],[1,0]]]";
    let f = write_temp(&format!(
        r#"{{"dim": 2, "terms": [{{"unitary": {bad}, "projector": {id}, "side": "PU"}}]}}"#
    ));
    assert_clean_failure(&clonecheck(&["channel-check", f.path().to_str().unwrap()]));
}

#[test]
fn json_report_round_trips_exactly() {
    for q in NamedQubit::ALL {
        let out = clonecheck(&["teleport", "--state", q.name(), "--format", "json"]);
        let v = json(&out);
        let expected = run_teleport(&q.density()).unwrap();
        assert_eq!(
            v["dist_b"].as_f64().unwrap().to_bits(),
            expected.dist_b.to_bits()
        );
        assert_eq!(
            v["dist_c"].as_f64().unwrap().to_bits(),
            expected.dist_c.to_bits()
        );
        let b: clonecheck_core::states::DensityOperator =
            serde_json::from_value(v["b_marginal"].clone()).unwrap();
        assert_eq!(b, expected.b_marginal);
    }
}

#[test]
fn state_file_round_trips_exactly() {
    let rho = clonecheck_core::states::pure(&clonecheck_core::states::random_pure(2, 99)).unwrap();
    let doc = serde_json::json!({ "dim": 2, "kind": "matrix", "matrix": rho });
    let f = write_temp(&doc.to_string());
    let out = clonecheck(&[
        "teleport",
        "--state-file",
        f.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let back: clonecheck_core::states::DensityOperator =
        serde_json::from_value(json(&out)["input_state"].clone()).unwrap();
    assert_eq!(back, rho);
}

#[test]
fn text_tables_are_fixed_width() {
    let export = clonecheck(&["export-channel"]);
    let f = write_temp(std::str::from_utf8(&export.stdout).unwrap());
    let out = clonecheck(&["channel-check", f.path().to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines() {
        assert!(line.len() > 28, "{line}");
        assert_eq!(line.as_bytes()[27], b' ', "{line}");
    }
    assert!(text
        .lines()
        .any(|l| l.starts_with("completely positive         yes")));
}
