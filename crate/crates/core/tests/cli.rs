//! End-to-end checks of the `tncount` binary.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const REPORT_FIELDS: [&str; 19] = [
    "command",
    "input",
    "n",
    "m",
    "g",
    "c",
    "d",
    "model_count",
    "satisfiable",
    "branches_evaluated",
    "predicted_cost",
    "bipartition",
    "q",
    "entropy",
    "entropy_defined",
    "beta",
    "partition_trace",
    "elapsed_ms",
    "warnings",
];

fn tncount(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tncount"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(args: &[&str], stdin: &str) -> Value {
    let out = tncount(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1, "{text}");
    serde_json::from_str(&text).unwrap()
}

fn corpus() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "cnf"))
        .collect();
    files.sort();
    files
}

#[test]
fn corpus_count_matches_oracle() {
    let files = corpus();
    assert!(files.len() >= 10);
    for path in files {
        let p = path.to_str().unwrap();
        let counted = report(&["count", p, "--json"], "");
        let oracle = report(&["oracle", p, "--json"], "");
        assert_eq!(counted["model_count"], oracle["model_count"], "{p}");
        assert_eq!(counted["satisfiable"], oracle["satisfiable"], "{p}");
        let solved = report(&["solve", p, "--json"], "");
        assert_eq!(solved["satisfiable"], oracle["satisfiable"], "{p}");
    }
}

#[test]
fn corpus_known_counts() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    // 4-queens has two placements; 3 pigeons never fit 2 holes; the xor
    // chain fixes y from x; 5 unconstrained variables give 2^5
    for (file, want) in [
        ("queens4.cnf", "2"),
        ("php3_2.cnf", "0"),
        ("xor_chain.cnf", "64"),
        ("no_clauses.cnf", "32"),
        ("contradiction.cnf", "0"),
    ] {
        let v = report(&["count", dir.join(file).to_str().unwrap(), "--json"], "");
        assert_eq!(v["model_count"], want, "{file}");
    }
}

#[test]
fn json_field_set_is_fixed() {
    let input = "p cnf 3 2\n1 2 0\n-1 3 0\n";
    for args in [
        vec!["count", "--json"],
        vec!["solve", "--json"],
        vec!["stats", "--json"],
        vec!["oracle", "--json"],
        vec!["entropy", "--json", "--bipartition", "1"],
        vec!["physics", "--json"],
    ] {
        let v = report(&args, input);
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut want = REPORT_FIELDS.to_vec();
        want.sort_unstable();
        let mut got = keys.clone();
        got.sort_unstable();
        assert_eq!(got, want, "{args:?}");
        assert!(v["model_count"].is_string() || v["model_count"].is_null());
        assert!(v["predicted_cost"].is_string());
        assert!(v["elapsed_ms"].is_number());
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str], input: &str| tncount(args, input).status.code().unwrap();
    assert_eq!(code(&["count"], "p cnf 2 1\n1 2 0\n"), 0);
    assert_eq!(code(&["count"], "1 2 0\n"), 1);
    assert_eq!(code(&["count"], "p cnf 2 1\n1 x 0\n"), 1);
    assert_eq!(code(&["count", "--no-such-flag"], ""), 1);
    assert_eq!(code(&["frobnicate"], ""), 1);
    assert_eq!(code(&["--help"], ""), 0);
    assert_eq!(code(&["--version"], ""), 0);

    let mut ring = String::from("p cnf 35 35\n");
    for v in 1..=35 {
        ring.push_str(&format!("{v} -{} 0\n", v % 35 + 1));
    }
    assert_eq!(code(&["count"], &ring), 2);
    assert_eq!(code(&["oracle"], &ring), 2);
    assert_eq!(code(&["entropy", "--bipartition", "1"], &ring), 2);
    assert_eq!(code(&["physics"], &ring), 2);
}

#[test]
fn branch_limit_flags() {
    // x_v -> x_{v+1} around a ring: all equal, so exactly two models
    let mut ring = String::from("p cnf 16 16\n");
    for v in 1..=16 {
        ring.push_str(&format!("-{v} {} 0\n", v % 16 + 1));
    }
    let limited = tncount(&["count", "--max-branch-vars", "15"], &ring);
    assert_eq!(limited.status.code(), Some(2));
    let v = report(&["count", "--json", "--max-branch-vars", "16"], &ring);
    assert_eq!(v["model_count"], "2");
    let v = report(&["count", "--json", "--max-branch-vars", "3", "--force"], &ring);
    assert_eq!(v["model_count"], "2");
    assert_eq!(v["c"], 16);
    assert_eq!(v["branches_evaluated"], "65536");
}

#[test]
fn reads_stdin_and_dash() {
    let a = report(&["count", "--json"], "p cnf 2 1\n1 2 0\n");
    let b = report(&["count", "-", "--json"], "p cnf 2 1\n1 2 0\n");
    assert_eq!(a["model_count"], "3");
    assert_eq!(a["input"], "<stdin>");
    assert_eq!(b["model_count"], "3");
}

#[test]
fn warnings_are_reported() {
    let v = report(&["count", "--json"], "p cnf 2 3\n1 -1 0\n2 2 0\n");
    let w = v["warnings"].as_array().unwrap();
    assert_eq!(w.len(), 3, "{w:?}");
    assert_eq!(v["model_count"], "2");
}

#[test]
fn threads_do_not_change_results() {
    let gen = tncount(&["gen", "--mode", "ksat", "--n", "22", "--m", "60", "--k", "3", "--seed", "9"], "");
    let text = String::from_utf8(gen.stdout).unwrap();
    let one = report(&["count", "--json", "--threads", "1"], &text);
    let many = report(&["count", "--json", "--threads", "8"], &text);
    assert_eq!(one["model_count"], many["model_count"]);
    let oracle = report(&["oracle", "--json"], &text);
    assert_eq!(one["model_count"], oracle["model_count"]);
}

#[test]
fn generated_instances_parse_back() {
    for args in [
        vec!["gen", "--mode", "ksat", "--n", "10", "--m", "25", "--k", "3", "--seed", "1"],
        vec!["gen", "--mode", "rssat", "--n", "12", "--r", "3", "--s", "2", "--seed", "1"],
    ] {
        let out = tncount(&args, "");
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let v = report(&["count", "--json"], &text);
        assert!(v["warnings"].as_array().unwrap().is_empty());
    }
    let out = tncount(&["gen", "--mode", "rof", "--leaves", "12", "--seed", "2"], "");
    let e = tncount::cnf::parse_expression(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    assert!(e.is_read_once());
    assert_eq!(e.num_leaves(), 12);
}

#[test]
fn stats_dump_lists_every_node() {
    let out = tncount(&["stats", "--dump"], "p cnf 2 2\n1 2 0\n-1 0\n");
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| l.split('\t').count() == 4).collect();
    // var cap, copy, two clauses, two output caps, var cap for x2
    assert_eq!(rows.len(), 7, "{text}");
}
