//! End-to-end tests driving the compiled `diarykit` binary.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diarykit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn json_result(out: &Output) -> serde_json::Value {
    let text = stdout(out);
    let record: serde_json::Value =
        serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("bad JSON {text:?}: {e}"));
    assert!(record["elapsed_ms"].is_u64(), "record carries elapsed_ms");
    assert!(record["version"].is_string(), "record carries version");
    record
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("diarykit-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("write temp file");
    path
}

// ===== degree =====

#[test]
fn degree_reports_counts_as_decimal_strings() {
    let out = run(&["degree", "clique:2", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let record = json_result(&out);
    assert_eq!(record["command"], "degree");
    assert_eq!(record["result"]["diary_count"], "36");
    assert_eq!(record["result"]["aut"], "2");
    assert_eq!(record["result"]["degree"], "72");

    let out = run(&["degree", "empty:2", "--format", "json"]);
    assert!(out.status.success());
    let record = json_result(&out);
    assert_eq!(record["result"]["diary_count"], "23");
    assert_eq!(record["result"]["degree"], "46");
}

#[test]
fn degree_of_four_clique_is_zero() {
    let out = run(&["degree", "clique:4", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let record = json_result(&out);
    assert_eq!(record["result"]["diary_count"], "0");
    assert_eq!(record["result"]["degree"], "0");
    assert_eq!(record["result"]["aut"], "24");
}

#[test]
fn degree_is_deterministic_across_worker_counts() {
    let one = json_result(&run(&["degree", "clique:2", "--workers", "1", "--format", "json"]));
    let four = json_result(&run(&["degree", "clique:2", "--workers", "4", "--format", "json"]));
    assert_eq!(one["result"], four["result"], "worker count changed the record");
}

#[test]
fn degree_rejects_bad_specs() {
    let out = run(&["degree", "clique:abc"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error:"), "{}", stderr(&out));

    let out = run(&["degree", "clique:5"]);
    assert_eq!(out.status.code(), Some(1), "targets beyond the maximum are refused");
}

#[test]
fn degree_respects_node_cap() {
    let out = run(&["degree", "clique:3", "--node-cap", "50"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("node cap"), "{}", stderr(&out));
}

// ===== enumerate =====

#[test]
fn enumerate_emits_the_unique_single_leaf_diary() {
    let out = run(&["enumerate", "clique:1", "--emit", "json"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"words":["12"]}"#);

    let out = run(&["enumerate", "clique:1", "--emit", "dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("digraph"), "{text}");
    assert!(text.contains("doublecircle"), "{text}");
}

#[test]
fn enumerate_streams_every_pair_diary() {
    let out = run(&["enumerate", "clique:2", "--emit", "json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 36);
    for line in lines {
        let diary: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(diary["words"].as_array().unwrap().len(), 2);
    }
}

// ===== validate =====

#[test]
fn validate_accepts_a_valid_diary_file() {
    let path = temp_file("valid.json", r#"{"words":["12"]}"#);
    let out = run(&["validate", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("valid: true"), "{}", stdout(&out));
    assert!(stdout(&out).contains("Leaf"), "{}", stdout(&out));
    let _ = std::fs::remove_file(path);
}

#[test]
fn validate_rejects_an_invalid_diary_with_exit_two() {
    let path = temp_file("invalid.json", r#"{"words":["10"]}"#);
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("valid: false"), "{}", stdout(&out));
    let _ = std::fs::remove_file(path);
}

#[test]
fn validate_reads_stdin_when_asked() {
    let mut child = bin()
        .args(["validate", "-", "--format", "json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"words":["012","10012"]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let record = json_result(&out);
    assert_eq!(record["result"]["valid"], true);
}

// ===== oracle =====

#[test]
fn oracle_lists_two_leaf_census() {
    let out = run(&["oracle", "--max-leaves", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("60 diaries"), "{text}");
    assert!(text.contains("(59 with exactly 2)"), "{text}");
    assert!(text.contains("clique:2: 36"), "{text}");
    assert!(text.contains("empty:2: 23"), "{text}");
}

#[test]
fn oracle_cross_check_matches_engine() {
    let out = run(&["oracle", "--max-leaves", "2", "--check", "clique:2", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let record = json_result(&out);
    assert_eq!(record["result"]["matches"], true);
    assert_eq!(record["result"]["oracle_count"], "36");
    assert_eq!(record["result"]["engine_count"], "36");
}

// ===== anticlique / tangent / aut / iso =====

#[test]
fn anticlique_counts_three_branches() {
    let out = run(&["anticlique", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("diary_count: 197613"), "{}", stdout(&out));

    let out = run(&["anticlique", "9"]);
    assert_eq!(out.status.code(), Some(1), "oversized anticliques are refused");
}

#[test]
fn tangent_prints_reference_value_and_rejects_zero() {
    let out = run(&["tangent", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("tangent(4): 272"), "{}", stdout(&out));

    let out = run(&["tangent", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error:"), "{}", stderr(&out));
}

#[test]
fn aut_and_iso_report_symmetries() {
    let out = run(&["aut", "path:2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("aut: 2"), "{}", stdout(&out));

    let out = run(&["iso", "clique:2", "path:1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("isomorphic: true"), "{}", stdout(&out));

    let out = run(&["iso", "clique:2", "empty:2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("isomorphic: false"), "{}", stdout(&out));
}
