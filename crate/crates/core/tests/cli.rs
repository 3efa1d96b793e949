//! Runs the built binary and compares its output with golden text.

use std::io::Write;
use std::process::{Command, Output};

fn partfrac(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_partfrac"));
    cmd.args(args);
    for var in [
        "PARTFRAC_MAX_TABLE",
        "PARTFRAC_MAX_FRACTAL",
        "PARTFRAC_MAX_TRACE_NODES",
        "PARTFRAC_SCAN_LIMIT",
        "PARTFRAC_CATALOG",
    ] {
        cmd.env_remove(var);
    }
    cmd.envs(env.iter().copied());
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const TRACE_10: &str = "\
p(10) = {p(0)} + {p(1)} + {p(2)} + {p(3)} + {p(4)} + {p(5)} + {p(6)} + {p(7)} + {p(8)} + {p(9)}
      = p(0) + p(1) + p(2) + p(3) + p(4) + p(5) + [p(6) - {p(0)} - {p(1)}] + [p(7) - {p(0)} - {p(1)}
        - {p(2)} - {p(3)}] + [p(8) - {p(0)} - {p(1)} - {p(2)} - {p(3)} - {p(4)} - {p(5)}] + [p(9)
        - {p(0)} - {p(1)} - {p(2)} - {p(3)} - {p(4)} - {p(5)} - {p(6)} - {p(7)}]
      = p(0) + p(1) + p(2) + p(3) + p(4) + p(5) + [p(6) - p(0) - p(1)] + [p(7) - p(0) - p(1) - p(2)
        - p(3)] + [p(8) - p(0) - p(1) - p(2) - p(3) - p(4) - [p(5) - {p(0)} - {p(1)}]] + [p(9)
        - p(0) - p(1) - p(2) - p(3) - p(4) - [p(5) - {p(0)}] - [p(6) - {p(0)} - {p(1)} - {p(2)}]
        - [p(7) - {p(0)} - {p(1)} - {p(2)} - {p(3)} - {p(4)}]]
      = p(0) + p(1) + p(2) + p(3) + p(4) + p(5) + [p(6) - p(0) - p(1)] + [p(7) - p(0) - p(1) - p(2)
        - p(3)] + [p(8) - p(0) - p(1) - p(2) - p(3) - p(4) - [p(5) - p(0) - p(1)]] + [p(9) - p(0)
        - p(1) - p(2) - p(3) - p(4) - [p(5) - p(0)] - [p(6) - p(0) - p(1) - p(2)] - [p(7) - p(0)
        - p(1) - p(2) - p(3) - [p(4) - {p(0)}]]]
      = p(0) + p(1) + p(2) + p(3) + p(4) + p(5) + [p(6) - p(0) - p(1)] + [p(7) - p(0) - p(1) - p(2)
        - p(3)] + [p(8) - p(0) - p(1) - p(2) - p(3) - p(4) - [p(5) - p(0) - p(1)]] + [p(9) - p(0)
        - p(1) - p(2) - p(3) - p(4) - [p(5) - p(0)] - [p(6) - p(0) - p(1) - p(2)] - [p(7) - p(0)
        - p(1) - p(2) - p(3) - [p(4) - p(0)]]]
      = 42
";

const TRACE_11_TWO: &str = "\
p(11) = {p(0)} + {p(1)} + {p(2)} + {p(3)} + {p(4)} + {p(5)} + {p(6)} + {p(7)} + {p(8)} + (11-1)/2
        + 1
      = p(0) + p(1) + p(2) + p(3) + p(4) + p(5) + [p(6) - {p(0)}] + [p(7) - {p(0)} - {p(1)}
        - {p(2)}] + [p(8) - {p(0)} - {p(1)} - {p(2)} - {p(3)} - {p(4)}] + (11-1)/2 + 1
      = p(0) + p(1) + p(2) + p(3) + p(4) + p(5) + [p(6) - p(0)] + [p(7) - p(0) - p(1) - p(2)]
        + [p(8) - p(0) - p(1) - p(2) - p(3) - p(4)] + (11-1)/2 + 1
      = 56
";

const DERIVE_12: &str = "\
p(n) = p(n-1) + p(n-2) - p(n-5) - p(n-7) + p(n-12)  [2 <= n <= 12]
classification: exact-truncation
";

#[test]
fn trace_golden() {
    let out = partfrac(&["trace", "10"], &[]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), TRACE_10);
}

#[test]
fn trace_two_sub_golden() {
    let out = partfrac(&["trace", "11", "--tail", "two"], &[]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), TRACE_11_TWO);
}

#[test]
fn trace_machine_is_json() {
    let out = partfrac(
        &["--format", "machine", "trace", "10", "--tail", "one"],
        &[],
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["total"], "42");
    assert_eq!(doc["steps"], 4);
    assert_eq!(doc["variant"], "one");
}

#[test]
fn derive_golden() {
    let out = partfrac(
        &["derive", "--cap", "12", "--pn", "one", "--pn1", "one"],
        &[],
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out), DERIVE_12);
}

#[test]
fn derive_machine_terms() {
    let out = partfrac(
        &[
            "--format", "machine", "derive", "--cap", "12", "--pn", "one", "--pn1", "one",
        ],
        &[],
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        doc["terms"],
        serde_json::json!([[1, 1], [2, 1], [5, -1], [7, -1], [12, 1]])
    );
    assert_eq!(doc["classification"], "exact-truncation");
}

#[test]
fn derive_small_cap_is_usage_error() {
    let out = partfrac(
        &["derive", "--cap", "2", "--pn", "one", "--pn1", "one"],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn eval_agrees() {
    let out = partfrac(&["eval", "200"], &[]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("fractal    = 3972999029388"));
    assert!(stdout(&out).contains("agree      = true"));
}

#[test]
fn env_limits_apply() {
    let out = partfrac(&["eval", "100"], &[("PARTFRAC_MAX_FRACTAL", "50")]);
    assert_eq!(out.status.code(), Some(3));
    let out = partfrac(&["eval", "10"], &[("PARTFRAC_MAX_TABLE", "lots")]);
    assert_eq!(out.status.code(), Some(2));
}

fn record_file(line: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "{line}").unwrap();
    file
}

const TRUNCATED_22: &str = r#"{"key":"","coefficients":{"1":1,"2":1,"5":-1,"7":-1,"12":1,"15":1,"22":-1},"tail":{"even":["0","0"],"odd":["0","0"]},"claimed":{"lo":2,"hi":24},"empirical":null,"provenance":[],"classification":null}"#;

#[test]
fn verify_file_reports_first_failure() {
    let file = record_file(TRUNCATED_22);
    let path = file.path().to_str().unwrap();
    let out = partfrac(&["verify", "--file", path, "--to", "40"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("claim holds; valid on [2 <= n <= 25]"),
        "{text}"
    );
    assert!(text.contains("first failure: n = 26"), "{text}");
}

#[test]
fn verify_overclaimed_record_fails() {
    let file = record_file(&TRUNCATED_22.replace(r#""hi":24"#, r#""hi":30"#));
    let path = file.path().to_str().unwrap();
    let out = partfrac(
        &[
            "--format", "machine", "verify", "--file", path, "--to", "40",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["claim_holds"], false);
    assert_eq!(doc["first_failure"]["n"], 26);
}

#[test]
fn verify_inline_coefficients() {
    let out = partfrac(
        &[
            "verify",
            "--coeffs",
            "1:1,2:1,5:-1,7:-1,12:1",
            "--claimed",
            "2..12",
            "--to",
            "20",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("first failure: n = 15"));
}

#[test]
fn verify_rejects_garbage() {
    let file = record_file("not json");
    let path = file.path().to_str().unwrap();
    let out = partfrac(&["verify", "--file", path, "--to", "40"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = partfrac(&["verify", "--coeffs", "1:x", "--to", "40"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mine_writes_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.jsonl");
    let out = partfrac(
        &[
            "mine",
            "--caps",
            "12..14",
            "--scan",
            "40",
            "--catalog",
            path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("27 jobs, "));
    let body = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = body.lines().collect();
    assert!(!lines.is_empty());
    for line in lines {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(record["claimed"]["lo"].as_u64().unwrap() >= 1);
    }
}

#[test]
fn mine_catalog_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env.jsonl");
    let out = partfrac(
        &["mine", "--caps", "12", "--scan", "30"],
        &[("PARTFRAC_CATALOG", path.to_str().unwrap())],
    );
    assert!(out.status.success());
    assert!(path.exists());
}

#[test]
fn bench_lists_methods() {
    let out = partfrac(&["bench", "50", "--no-fractal"], &[]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("parts-dp"));
    assert!(text.contains("pentagonal"));
    assert!(!text.contains("fractal "));
}

#[test]
fn selftest_passes() {
    let out = partfrac(&["selftest"], &[]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("8/8 checks passed\n"));
}
