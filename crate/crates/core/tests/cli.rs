mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::*;
use factor_series::io::write_edge_list;
use factor_series::{run_series, OperatorKind, SeriesStatus};
use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_factor-series"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn status_of(doc: &Path) -> String {
    let v: Value = serde_json::from_str(&fs::read_to_string(doc).unwrap()).unwrap();
    v["status"].as_str().unwrap().to_owned()
}

#[test]
fn decompose_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g2.txt");
    let doc = dir.path().join("d.json");
    fs::write(&input, write_edge_list(&g2())).unwrap();
    let out = cli(&[
        "decompose",
        "--operator",
        "clean",
        "--input",
        path(&input),
        "--output",
        path(&doc),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(status_of(&doc), "terminated");
    let out = cli(&["verify", "--decomposition", path(&doc), "--input", path(&input)]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let out = cli(&["reconstruct", "--decomposition", path(&doc)]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), write_edge_list(&g2()));
}

#[test]
fn tampered_documents_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g3.txt");
    let doc = dir.path().join("d.json");
    fs::write(&input, write_edge_list(&g3())).unwrap();
    cli(&[
        "decompose",
        "--operator",
        "clean",
        "--input",
        path(&input),
        "--output",
        path(&doc),
    ]);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&doc).unwrap()).unwrap();
    v["edges"].as_array_mut().unwrap().pop();
    let tampered = dir.path().join("t.json");
    fs::write(&tampered, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let out = cli(&[
        "verify",
        "--decomposition",
        path(&tampered),
        "--input",
        path(&input),
    ]);
    assert_eq!(out.status.code(), Some(1));

    let other = dir.path().join("g2.txt");
    fs::write(&other, write_edge_list(&g2())).unwrap();
    let out = cli(&["verify", "--decomposition", path(&doc), "--input", path(&other)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn weak_budget_is_a_normal_outcome() {
    let g = corpus(100, 22)
        .into_iter()
        .find(|g| run_series(g, OperatorKind::Weak, 5).unwrap().status == SeriesStatus::BudgetExceeded)
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    let doc = dir.path().join("d.json");
    fs::write(&input, write_edge_list(&g)).unwrap();
    let args = [
        "decompose",
        "--operator",
        "weak",
        "--max-levels",
        "5",
        "--input",
        path(&input),
    ];
    let out = cli(&[&args[..], &["--output", path(&doc)]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(status_of(&doc), "budget_exceeded");
    let out = cli(&["verify", "--decomposition", path(&doc), "--input", path(&input)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    fs::write(&input, write_edge_list(&corpus(3, 51)[2])).unwrap();
    let mut docs = Vec::new();
    for threads in ["1", "4"] {
        let doc = dir.path().join(format!("d{threads}.json"));
        let out = cli(&[
            "--threads",
            threads,
            "decompose",
            "--operator",
            "factor",
            "--max-levels",
            "6",
            "--input",
            path(&input),
            "--output",
            path(&doc),
        ]);
        assert_eq!(out.status.code(), Some(0));
        docs.push(fs::read(&doc).unwrap());
    }
    assert_eq!(docs[0], docs[1]);
}

#[test]
fn bipartite_input_and_generator() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["gen", "anti-matching", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 12);
    let input = dir.path().join("am.txt");
    let doc = dir.path().join("am.json");
    let dot = dir.path().join("am.dot");
    fs::write(&input, &out.stdout).unwrap();
    let out = cli(&[
        "decompose",
        "--operator",
        "factor",
        "--bipartite",
        "--input",
        path(&input),
        "--output",
        path(&doc),
        "--dot",
        path(&dot),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(status_of(&doc), "terminated");
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph"));
}

#[test]
fn inspection_commands() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g3.txt");
    fs::write(&input, write_edge_list(&g3())).unwrap();
    let out = cli(&["cliques", "--input", path(&input)]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "1 2 3 4\n1 2 3 5\n1 2 6\n"
    );
    let out = cli(&["oracle", "--input", path(&input)]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 2\n1 2 3\n");
    let out = cli(&["oracle", "--input", path(&input), "--chains", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1,2 < 1,2,3\n");
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    fs::write(&input, "a b c\n").unwrap();
    assert_eq!(cli(&["cliques", "--input", path(&input)]).status.code(), Some(2));
    assert_eq!(
        cli(&["cliques", "--input", path(&dir.path().join("none"))])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cli(&["decompose", "--operator", "strong"]).status.code(), Some(2));
    assert_eq!(cli(&["gen", "anti-matching", "1"]).status.code(), Some(2));
    assert_eq!(cli(&[]).status.code(), Some(2));
}
