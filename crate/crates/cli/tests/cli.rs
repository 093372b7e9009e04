//! End-to-end runs of the binary: pipelines, exit codes, file formats.

mod common;

use common::*;
use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fatgraph"))
}

#[test]
fn pipeline_gen_graph_decompose_solve() {
    let dir = tempfile::tempdir().unwrap();
    let objects = dir.path().join("objects.json");
    let graph = dir.path().join("graph.txt");
    let decomp = dir.path().join("decomp.json");
    let witness = dir.path().join("witness.json");

    run_bin(&["gen", "--n", "12", "--dim", "2", "--density", "2", "--seed", "5", "-o", path_str(&objects)]);
    run_bin(&["build-graph", path_str(&objects), "-o", path_str(&graph)]);
    run_bin(&["decompose", path_str(&objects), "-o", path_str(&decomp)]);

    let out = bin()
        .args([
            "solve",
            "subcoloring",
            path_str(&graph),
            "--decomp",
            path_str(&decomp),
            "--witness",
            path_str(&witness),
        ])
        .output()
        .unwrap();
    let code = out.status.code().unwrap();
    assert!(code == 0 || code == 1, "unexpected exit {code}");
    if code == 0 {
        let text = fs::read_to_string(&witness).unwrap();
        assert!(text.contains("\"colors\""));
    }
}

#[test]
fn reduce_emits_expected_files_and_oracles_agree() {
    let dir = tempfile::tempdir().unwrap();
    let formula = dir.path().join("f.cnf");
    // Unsatisfiable pattern: x != y, x != z, y != z over booleans.
    fs::write(&formula, "p nae 3 4\n1 1 2\n1 1 3\n2 2 3\n2 3 3\n").unwrap();

    let nae = bin().args(["oracle", "nae", path_str(&formula)]).output().unwrap();
    assert_eq!(nae.status.code(), Some(1), "pattern should be unsatisfiable");

    let prefix = dir.path().join("out");
    run_bin(&[
        "reduce",
        path_str(&formula),
        "--dim",
        "2",
        "--variant",
        "cutuncut",
        "-o",
        path_str(&prefix),
    ]);
    let inst = dir.path().join("out.inst.json");
    assert!(dir.path().join("out.graph.txt").exists());
    assert!(inst.exists());

    // The zero-cut oracle must agree with NAE unsatisfiability.
    let zero = bin().args(["oracle", "zero-cut", path_str(&inst)]).output().unwrap();
    assert_eq!(zero.status.code(), Some(1));

    // Satisfiable counterpart.
    fs::write(&formula, "p nae 3 4\n1 2 3\n1 2 3\n1 2 3\n1 2 3\n").unwrap();
    let nae = bin().args(["oracle", "nae", path_str(&formula)]).output().unwrap();
    assert_eq!(nae.status.code(), Some(0));
    run_bin(&[
        "reduce",
        path_str(&formula),
        "--dim",
        "2",
        "--variant",
        "cutuncut",
        "-o",
        path_str(&prefix),
    ]);
    let zero = bin().args(["oracle", "zero-cut", path_str(&inst)]).output().unwrap();
    assert_eq!(zero.status.code(), Some(0));
}

#[test]
fn reduce_with_ball_embedding_produces_valid_objects() {
    let dir = tempfile::tempdir().unwrap();
    let formula = dir.path().join("f.cnf");
    fs::write(&formula, "p nae 3 4\n1 2 3\n1 2 3\n1 2 3\n1 2 3\n").unwrap();
    let prefix = dir.path().join("ball");
    run_bin(&[
        "reduce",
        path_str(&formula),
        "--dim",
        "3",
        "--variant",
        "subcoloring",
        "--embed",
        "balls",
        "-o",
        path_str(&prefix),
    ]);
    let objects = dir.path().join("ball.objects.json");
    let graph_path = dir.path().join("ball.graph.txt");
    assert!(objects.exists() && graph_path.exists());

    // Rebuilding the intersection graph from the emitted file reproduces
    // the emitted abstract graph edge-for-edge (ids are vertex labels, and
    // object order follows vertex order).
    let rebuilt = dir.path().join("rebuilt.txt");
    run_bin(&["build-graph", path_str(&objects), "-o", path_str(&rebuilt)]);
    let a = fs::read_to_string(&graph_path).unwrap();
    let b = fs::read_to_string(&rebuilt).unwrap();
    let strip_header = |s: &str| {
        s.lines().skip(1).map(|l| l.to_string()).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(strip_header(&a), strip_header(&b));
}

#[test]
fn amod_command_and_cap_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    fs::write(&graph, "p 5 4\ne 0 1\ne 1 2\ne 2 3\ne 3 4\n").unwrap();
    let out = bin().args(["amod", path_str(&graph)]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("amod ="), "got {text}");

    // A 19-vertex graph is over the XP cap: exit code 3.
    let mut big = String::from("p 19 0\n");
    big.push('\n');
    fs::write(&graph, big).unwrap();
    let out = bin().args(["amod", path_str(&graph)]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "not a graph\n").unwrap();
    let out = bin().args(["amod", path_str(&bad)]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let formula = dir.path().join("bad.cnf");
    fs::write(&formula, "p nae 2 1\n1 -2 1\n").unwrap();
    let out = bin()
        .args(["reduce", path_str(&formula), "--dim", "2", "--variant", "subcoloring", "-o", "x"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cutuncut_solve_agrees_with_oracle_via_files() {
    let dir = tempfile::tempdir().unwrap();
    // A handcrafted weighted instance: s-a-t path plus a parallel heavy
    // edge; optimum routes the cut through the light edges.
    let inst = dir.path().join("inst.json");
    fs::write(
        &inst,
        r#"{"graph":{"n":4,"edges":[[0,1,2],[1,2,3],[0,3,1],[3,2,4]]},"S":[0],"T":[2]}"#,
    )
    .unwrap();
    let graph = dir.path().join("g.txt");
    fs::write(&graph, "p 4 4 weighted\ne 0 1 2\ne 0 3 1\ne 1 2 3\ne 2 3 4\n").unwrap();
    let decomp = dir.path().join("d.json");
    fs::write(
        &decomp,
        r#"{"modulator":[0,1,2,3],"components":[],"alpha_bounds":[],"k":4}"#,
    )
    .unwrap();

    let solve = bin()
        .args([
            "solve",
            "cutuncut",
            path_str(&inst),
            "--decomp",
            path_str(&decomp),
            "--witness",
            path_str(&dir.path().join("w.json")),
        ])
        .output()
        .unwrap();
    assert_eq!(solve.status.code(), Some(0));
    let solve_out = String::from_utf8_lossy(&solve.stdout);

    let oracle = bin().args(["oracle", "cutuncut", path_str(&inst)]).output().unwrap();
    let oracle_out = String::from_utf8_lossy(&oracle.stdout);
    assert_eq!(solve_out.trim(), oracle_out.trim());
}

#[test]
fn bench_csv_schema() {
    let out = bin()
        .args(["bench", "--suite", "separator", "--sizes", "30", "--seeds", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "suite,d,n,seed,separator_size,width_k,wall_ms,result"
    );
    assert_eq!(lines.count(), 1);
}
