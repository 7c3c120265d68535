//! End-to-end tests against the built binary: golden outputs, JSON schema
//! round-trips, exit codes, and byte-stability of reports.

use std::process::{Command, Output};

fn flatflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = flatflow(args);
    assert!(
        out.status.success(),
        "expected success for {args:?}, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    flatflow(args).status.code().expect("no signal")
}

#[test]
fn hierarchy_text_is_the_golden_equation() {
    assert_eq!(
        stdout(&["hierarchy", "--family", "D", "--lhs", "2,2"]),
        "1/12*p1^3 - 1/2*p1*p2 + p3\n"
    );
    assert_eq!(
        stdout(&["hierarchy", "--family", "D", "--lhs", "0,4"]),
        "1/8*p1^3*q + 1/2*p1*p2*q + 1/2*p3*q\n"
    );
}

#[test]
fn hierarchy_json_matches_schema() {
    let text = stdout(&["hierarchy", "--family", "A", "--lhs", "2,3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["family"], "A");
    assert_eq!(v["lhs"], serde_json::json!([2, 3]));
    assert_eq!(v["q_factor"], false);
    assert_eq!(v["rhs"]["vars"], "p");
    assert!(v["rhs"]["terms"].is_array());
}

#[test]
fn phat_oracle_prints_the_count() {
    assert_eq!(
        stdout(&["oracle", "phat", "--i", "3", "--j", "4", "--gammas", "2,3"]),
        "2\n"
    );
    let json = stdout(&[
        "oracle", "phat", "--i", "3", "--j", "4", "--gammas", "2,3", "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["count"], 2);
}

#[test]
fn potential_json_follows_documented_schema() {
    let text = stdout(&["potential", "--family", "B", "--n", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["family", "N", "F", "eta", "weights", "delta"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["family"], "B");
    assert_eq!(v["N"], 2);
}

#[test]
fn wdvv_report_has_quadruple_count_and_is_stable() {
    let mask = |s: &str| -> serde_json::Value {
        let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    let a = mask(&stdout(&["verify", "wdvv", "--family", "A", "--n", "6", "--json"]));
    let b = mask(&stdout(&["verify", "wdvv", "--family", "A", "--n", "6", "--json"]));
    assert_eq!(a, b, "reports must be byte-stable modulo timing");
    assert_eq!(a["quadruples_checked"], 315);
    assert_eq!(a["failures"], serde_json::json!([]));
}

#[test]
fn fay_report_lists_coefficients() {
    let text = stdout(&["verify", "fay", "--family", "A", "--n", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let coeffs = v["coefficients"].as_array().unwrap();
    assert!(coeffs.iter().any(|c| c == "fay:(1,2)"));
    assert!(coeffs.iter().any(|c| c == "log:(1,1)"));
    assert_eq!(v["first_mismatch"], serde_json::Value::Null);
}

#[test]
fn rtable_text_contains_known_row() {
    let text = stdout(&["rtable", "--family", "B", "--max-order", "4"]);
    assert!(text.lines().any(|l| l.starts_with("(2,2) {1,1,1} -> 1/3")));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(exit_code(&["potential", "--family", "E", "--n", "3"]), 2);
    assert_eq!(exit_code(&["potential", "--family", "D", "--n", "2"]), 2);
    assert_eq!(
        exit_code(&["verify", "fay", "--family", "A", "--n", "4", "--cap", "99"]),
        2
    );
    assert_eq!(
        exit_code(&["hierarchy", "--family", "A", "--lhs", "2"]),
        2
    );
    assert_eq!(
        exit_code(&["hierarchy", "--family", "B", "--lhs", "0,3"]),
        2
    );
    assert_eq!(exit_code(&["verify", "enumerative", "--family", "B", "--n", "4"]), 2);
    // clap-level parse failure
    assert_eq!(exit_code(&["no-such-verb"]), 2);
}

#[test]
fn verify_verbs_pass_on_small_dimensions() {
    assert_eq!(
        exit_code(&["verify", "stabilization", "--family", "B", "--n1", "3", "--n2", "5"]),
        0
    );
    assert_eq!(
        exit_code(&[
            "verify",
            "compatibility",
            "--family",
            "D",
            "--triple",
            "2,2,3",
            "--n",
            "6",
        ]),
        0
    );
    assert_eq!(
        exit_code(&["verify", "enumerative", "--family", "A", "--n", "4"]),
        0
    );
    assert_eq!(
        exit_code(&["verify", "all", "--max-n", "3", "--seed", "7", "--jobs", "2"]),
        0
    );
}

#[test]
fn json_alias_matches_format_json() {
    let a = stdout(&["metric", "--family", "D", "--n", "4", "--json"]);
    let b = stdout(&["metric", "--family", "D", "--n", "4", "--format", "json"]);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    // distinguished corner entry of the D metric
    assert_eq!(v["eta"][3][3], "1");
    assert_eq!(v["eta"][0][2], "1");
}
