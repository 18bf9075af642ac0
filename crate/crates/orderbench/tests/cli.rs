use std::path::Path;
use std::process::{Command, Output};

use orderbench::json::TreeJson;
use serde_json::Value;

fn orderbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orderbench"))
        .args(args)
        .env_remove("ORDERBENCH_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON document")
}

fn config(o: &Output) -> Value {
    let line = String::from_utf8_lossy(&o.stderr)
        .lines()
        .next()
        .expect("config line")
        .to_string();
    serde_json::from_str::<Value>(&line).expect("config is JSON")["config"].clone()
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

#[test]
fn check_all_is_deterministic() {
    let a = orderbench(&["check", "--suite", "all", "--seed", "7"]);
    let b = orderbench(&["check", "--suite", "all", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(config(&a)["seed"], 7);
    assert_eq!(stdout_json(&a)["passed"], true);
}

#[test]
fn backforth_q_q_four_rounds() {
    let o = orderbench(&["backforth", "run", "--left", "q", "--right", "q", "--rounds", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["transcript"].as_array().unwrap().len(), 4);
    assert_eq!(v["order_preserving"], true);
    assert_eq!(config(&o)["seed"], 0);
}

#[test]
fn backforth_emits_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("transcript.json");
    let o = orderbench(&[
        "backforth",
        "run",
        "--left",
        "q",
        "--right",
        "dyadic",
        "--rounds",
        "64",
        "--emit",
        p(&path),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let t: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(t.len(), 64);
    for (k, step) in t.iter().enumerate() {
        assert_eq!(step["round"], k);
        assert!(step["dir"] == "forward" || step["dir"] == "backward");
    }
}

#[test]
fn finite_order_is_not_dense() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("three.json");
    std::fs::write(
        &path,
        r#"{"elements": ["a", "b", "c"], "pairs": [[0, 1, ">"], [1, 2, ">"]]}"#,
    )
    .unwrap();
    let o = orderbench(&[
        "backforth",
        "run",
        "--left",
        p(&path),
        "--right",
        "q",
        "--rounds",
        "8",
        "--budget",
        "64",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout_json(&o)["error"].is_string());

    std::fs::write(&path, r#"{"elements": ["a", "b", "c"], "pairs": [[0, 1, ">"]]}"#).unwrap();
    let o = orderbench(&["backforth", "run", "--left", p(&path), "--right", "q"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(orderbench(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(orderbench(&["check", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        orderbench(&["backforth", "run", "--left", "nowhere", "--right", "q"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(orderbench(&["--budget", "0", "check"]).status.code(), Some(2));
    assert_eq!(orderbench(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_orderbench"))
        .args(["backforth", "run", "--left", "q", "--right", "q", "--rounds", "2"])
        .env("ORDERBENCH_BUDGET", "123")
        .output()
        .unwrap();
    assert_eq!(config(&o)["budget"], 123);
}

#[test]
fn aronszajn_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let o = orderbench(&[
        "aronszajn",
        "build",
        "--support",
        "0,1,2,w,w+1",
        "--grid",
        "0,1,2,3",
        "--out",
        p(&path),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let built = stdout_json(&o);
    let file: TreeJson = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.nodes.len() as u64, built["nodes"].as_u64().unwrap());
    assert!(file.nodes.iter().all(|n| n.seq.is_some()));

    let c = orderbench(&["aronszajn", "check", "--in", p(&path)]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(stdout_json(&c)["check"]["passed"], true);
    assert_eq!(stdout_json(&c)["check"]["checked"], built["check"]["checked"]);

    // Raising one node's value past the grid breaks condition (1).
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let last = v["nodes"].as_array_mut().unwrap().last_mut().unwrap();
    last["seq"]["segments"]
        .as_array_mut()
        .unwrap()
        .push(serde_json::json!({"atom": "100"}));
    std::fs::write(&path, v.to_string()).unwrap();
    let bad = orderbench(&["aronszajn", "check", "--in", p(&path)]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(stdout_json(&bad)["check"]["passed"], false);

    let v = orderbench(&["aronszajn", "check", "--in", p(&dir.path().join("missing.json"))]);
    assert_eq!(v.status.code(), Some(2));
}

#[test]
fn tree_line_round_trip_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t.json");
    std::fs::write(
        &tree,
        r#"{"support": ["0", "1", "2"], "nodes": [
            {"id": 0, "parent": null, "level": "0"},
            {"id": 1, "parent": 0, "level": "1", "label": "1"},
            {"id": 2, "parent": 0, "level": "1", "label": "0"},
            {"id": 3, "parent": 1, "level": "2", "label": "5"},
            {"id": 4, "parent": 1, "level": "2", "label": "-1/2"}
        ]}"#,
    )
    .unwrap();
    let line = dir.path().join("line.json");
    let o = orderbench(&["suslin", "tree-to-line", "--in", p(&tree), "--emit", p(&line)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let l: Value = serde_json::from_str(&std::fs::read_to_string(&line).unwrap()).unwrap();
    let order: Vec<Vec<u64>> = l["branches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| {
            b["nodes"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap())
                .collect()
        })
        .collect();
    assert_eq!(order, vec![vec![0, 2], vec![0, 1, 4], vec![0, 1, 3]]);
    let back: orderbench::json::LineJson = serde_json::from_value(l).unwrap();
    assert_eq!(back.to_line().unwrap().branches().len(), 3);

    let dot = dir.path().join("t.dot");
    let o = orderbench(&["tree", "export", "--in", p(&tree), "--dot", p(&dot)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.contains("rank=same; n1; n2;"));
    assert_eq!(text.matches("->").count(), 4);
}

#[test]
fn line_to_tree_oracles() {
    let o = orderbench(&["suslin", "line-to-tree", "--oracle", "computable", "--steps", "16"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout_json(&o)["dense"].is_object());

    let o = orderbench(&[
        "suslin",
        "line-to-tree",
        "--oracle",
        "honest-q",
        "--steps",
        "10000",
        "--budget",
        "64",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert!(v["dense"].is_object());
    assert!(!v["intervals"].as_array().unwrap().is_empty());
}

#[test]
fn normalize_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t.json");
    // Two roots and a dead end; normalization keeps the binary cone.
    std::fs::write(
        &tree,
        r#"{"support": ["0", "1", "2"], "pre_normal": true, "nodes": [
            {"id": 0, "parent": null, "level": "0"},
            {"id": 1, "parent": 0, "level": "1"},
            {"id": 2, "parent": 0, "level": "1"},
            {"id": 3, "parent": 1, "level": "2"},
            {"id": 4, "parent": 1, "level": "2"},
            {"id": 5, "parent": 2, "level": "2"},
            {"id": 6, "parent": 2, "level": "2"},
            {"id": 7, "parent": 0, "level": "1"},
            {"id": 8, "parent": null, "level": "0"}
        ]}"#,
    )
    .unwrap();
    let before = orderbench(&["tree", "check", "--in", p(&tree)]);
    assert_eq!(before.status.code(), Some(1));
    let out = dir.path().join("n.json");
    let n = orderbench(&["tree", "normalize", "--in", p(&tree), "--out", p(&out)]);
    assert_eq!(n.status.code(), Some(0), "{}", String::from_utf8_lossy(&n.stderr));
    assert!(!stdout_json(&n)["stages"].as_array().unwrap().is_empty());
    let after = orderbench(&["tree", "check", "--in", p(&out)]);
    assert_eq!(
        after.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&after.stdout)
    );
}
