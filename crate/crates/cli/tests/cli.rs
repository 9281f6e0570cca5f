use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn tgq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgq"))
        .args(args)
        .env_remove("TGQ_CONFIG")
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn query_prints_json_envelope() {
    let o = tgq(&["query", path(&corpus("toy.jsonl")), "LOOKUP w OF node:a AT t=2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let env: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(env["bindings"][0]["value"], 3.0);
    assert_eq!(env["query"], "LOOKUP w OF node:a AT t=2");
    let keys: Vec<&String> = env.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 4);
}

#[test]
fn table_format_is_derived_from_the_envelope() {
    let o = tgq(&["--format", "table", "query", path(&corpus("toy.jsonl")), "LOOKUP w OF node:a AT t=2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("query: LOOKUP w OF node:a AT t=2\n"), "{text}");
    assert!(text.contains("| 3.0"), "{text}");
    assert!(text.contains("(1 bindings,"), "{text}");
}

#[test]
fn empty_dataset_has_zero_stats() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.jsonl");
    std::fs::write(&file, "").unwrap();
    let o = tgq(&["load", path(&file), "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stats: Value = serde_json::from_slice(&o.stdout).unwrap();
    for (k, v) in stats.as_object().unwrap() {
        assert_eq!(v, 0, "{k}");
    }
}

#[test]
fn malformed_line_is_a_data_error_citing_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.jsonl");
    let mut lines: Vec<String> = std::fs::read_to_string(corpus("toy.jsonl"))
        .unwrap()
        .lines()
        .take(6)
        .map(String::from)
        .collect();
    lines.push("{\"type\":\"node\",".into());
    std::fs::write(&file, lines.join("\n")).unwrap();
    let o = tgq(&["load", path(&file), "--check"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("TGQ-ERROR SCHEMA_ERROR "), "{err}");
    assert!(err.contains("line 7"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn exit_codes_follow_error_class() {
    let toy = corpus("toy.jsonl");
    let o = tgq(&["query"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("TGQ-ERROR USAGE_ERROR "));

    let o = tgq(&["query", "/nonexistent/data.jsonl", "LOOKUP w OF node:a AT t=2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("TGQ-ERROR IO_ERROR "));

    let o = tgq(&["query", path(&toy), "LOOKUP w OF"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("TGQ-ERROR PARSE_ERROR "));

    let o = tgq(&["query", path(&toy), "LOOKUP nope OF node:a AT t=2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("TGQ-ERROR UNKNOWN_ATTRIBUTE "), "{}", stderr(&o));

    let o = tgq(&["--threshold", "2", "query", path(&toy), "LOOKUP w OF node:a AT t=2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("TGQ-ERROR CONFIG_ERROR "));
}

#[test]
fn config_file_and_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "outputFormat = \"table\"\nsimilarityThreshold = 0.75\n").unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "colour = \"blue\"\n").unwrap();
    let toy = corpus("toy.jsonl");

    let o = tgq(&["--config", path(&good), "query", path(&toy), "LOOKUP w OF node:a AT t=2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("query: "));

    let o = tgq(&["--config", path(&bad), "query", path(&toy), "LOOKUP w OF node:a AT t=2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));

    let o = Command::new(env!("CARGO_BIN_EXE_tgq"))
        .args(["query", path(&toy), "LOOKUP w OF node:a AT t=2"])
        .env("TGQ_CONFIG", &good)
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("query: "));
}

#[test]
fn carry_forward_can_be_switched_off_per_attribute() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[carryForward]\nw = false\n").unwrap();
    let toy = corpus("toy.jsonl");
    let q = "LOOKUP w OF node:a AT t=1";
    let o = tgq(&["query", path(&toy), q]);
    assert_eq!(o.status.code(), Some(0));
    let o = tgq(&["--config", path(&cfg), "query", path(&toy), q]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("TGQ-ERROR MISSING_VALUE "), "{}", stderr(&o));
}

#[test]
fn load_without_check_prints_canonical_records() {
    let o = tgq(&["load", path(&corpus("toy.jsonl"))]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("again.jsonl");
    std::fs::write(&file, &o.stdout).unwrap();
    let again = tgq(&["load", path(&file)]);
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn gen_is_seeded() {
    let a = tgq(&["gen", "--seed", "7"]);
    let b = tgq(&["gen", "--seed", "7"]);
    let c = tgq(&["gen", "--seed", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn repl_runs_queries_and_history() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tgq"))
        .args(["repl", path(&corpus("toy.jsonl"))])
        .env_remove("TGQ_CONFIG")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"LOOKUP w OF node:a AT t=2\nLOOKUP w OF\n:history\n!1\n:quit\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(out.matches("\"value\": 3.0").count(), 2, "{out}");
    assert!(out.contains("   2  LOOKUP w OF"), "{out}");
    assert!(stderr(&o).starts_with("TGQ-ERROR PARSE_ERROR "));
}

#[test]
fn corpus_reports_failures_but_runs_everything() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("q.tgq");
    std::fs::write(&file, "# cell: a\nLOOKUP w OF node:a AT t=2\nLOOKUP w OF node:zz AT t=2\nPAIRS(ADJACENT) AT t=1\n").unwrap();
    let o = tgq(&["corpus", path(&corpus("toy.jsonl")), path(&file)]);
    assert_eq!(o.status.code(), Some(3));
    let lines: Vec<Value> = o.stdout.split(|b| *b == b'\n').filter(|l| !l.is_empty()).map(|l| serde_json::from_slice(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1]["error"]["code"], "UNKNOWN_ELEMENT");
    assert!(stderr(&o).contains("(line 3)"));
}
