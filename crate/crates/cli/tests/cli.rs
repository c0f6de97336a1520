//! End-to-end tests driving the real binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lppart::graph::evaluate;
use lppart::io::{gen_planted, planted_labels, read_metis, read_partition, write_metis, write_partition};

/// Fresh invocation with the seed environment cleared, so ambient settings
/// cannot leak into determinism checks.
fn lppart(dir: &Path) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lppart"));
    cmd.current_dir(dir).env_remove("LPPART_SEED");
    cmd
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().expect("binary runs");
    (
        status.code().expect("no signal"),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn field<'a>(stdout: &'a str, key: &str) -> &'a str {
    stdout
        .lines()
        .find_map(|line| line.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key}= line in {stdout:?}"))
}

fn write_test_graph(dir: &Path) -> std::path::PathBuf {
    let g = gen_planted(300, 4, 0.25, 0.01, 42);
    let path = dir.join("g.metis");
    write_metis(&g, &path).unwrap();
    path
}

#[test]
fn eval_agrees_with_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = write_test_graph(dir.path());
    let labels = planted_labels(300, 4);
    write_partition(&labels, dir.path().join("p.part")).unwrap();

    let (code, stdout, _) = run(lppart(dir.path()).args(["eval", "g.metis", "p.part", "--k", "4"]));
    assert_eq!(code, 0);

    let g = read_metis(&graph_path).unwrap();
    let metrics = evaluate(&g, &labels, 4).unwrap();
    assert_eq!(field(&stdout, "cut"), metrics.cut.to_string());
    assert_eq!(field(&stdout, "max_block_weight"), metrics.max_block_weight.to_string());
    assert_eq!(field(&stdout, "imbalance"), metrics.imbalance.to_string());
    assert_eq!(field(&stdout, "feasible"), "true");
}

#[test]
fn partition_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    write_test_graph(dir.path());
    let args = ["partition", "g.metis", "--k", "4", "--seed", "7", "--procs", "1"];

    let (code, out1, _) = run(lppart(dir.path()).args(args).args(["--out", "a.part"]));
    assert_eq!(code, 0);
    let (code, out2, _) = run(lppart(dir.path()).args(args).args(["--out", "b.part"]));
    assert_eq!(code, 0);
    assert_eq!(out1, out2);
    assert_eq!(
        fs::read(dir.path().join("a.part")).unwrap(),
        fs::read(dir.path().join("b.part")).unwrap()
    );

    // The written partition reproduces the printed metrics.
    let g = read_metis(dir.path().join("g.metis")).unwrap();
    let labels = read_partition(dir.path().join("a.part")).unwrap();
    let metrics = evaluate(&g, &labels, 4).unwrap();
    assert_eq!(field(&out1, "cut"), metrics.cut.to_string());
}

#[test]
fn multi_proc_partition_writes_a_feasible_result() {
    let dir = tempfile::tempdir().unwrap();
    write_test_graph(dir.path());
    let (code, _, _) = run(lppart(dir.path()).args([
        "partition", "g.metis", "--k", "4", "--seed", "3", "--procs", "4", "--out", "p.part",
    ]));
    assert_eq!(code, 0);
    let g = read_metis(dir.path().join("g.metis")).unwrap();
    let labels = read_partition(dir.path().join("p.part")).unwrap();
    assert_eq!(labels.len(), 300);
    assert!(evaluate(&g, &labels, 4).is_ok());
}

#[test]
fn report_json_carries_the_run() {
    let dir = tempfile::tempdir().unwrap();
    write_test_graph(dir.path());
    let (code, stdout, _) = run(lppart(dir.path()).args([
        "partition", "g.metis", "--k", "4", "--seed", "5", "--report", "r.json",
    ]));
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["k"], 4);
    assert_eq!(report["seed"], 5);
    assert_eq!(report["cut"].to_string(), field(&stdout, "cut"));
    assert_eq!(report["feasible"], true);
    assert_eq!(report["vcycles"].as_array().unwrap().len(), 2);
}

#[test]
fn env_var_supplies_the_default_seed() {
    let dir = tempfile::tempdir().unwrap();
    write_test_graph(dir.path());
    let flag = ["partition", "g.metis", "--k", "4", "--seed", "9", "--out", "flag.part"];
    let (code, _, _) = run(lppart(dir.path()).args(flag));
    assert_eq!(code, 0);
    let (code, _, _) = run(lppart(dir.path())
        .args(["partition", "g.metis", "--k", "4", "--out", "env.part"])
        .env("LPPART_SEED", "9"));
    assert_eq!(code, 0);
    assert_eq!(
        fs::read(dir.path().join("flag.part")).unwrap(),
        fs::read(dir.path().join("env.part")).unwrap()
    );

    let (code, _, stderr) = run(lppart(dir.path())
        .args(["partition", "g.metis", "--k", "4"])
        .env("LPPART_SEED", "not-a-number"));
    assert_eq!(code, 1, "{stderr}");
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    write_test_graph(dir.path());
    let (code, _, _) = run(lppart(dir.path()).args(["partition", "g.metis"]));
    assert_eq!(code, 1);
    let (code, _, stderr) =
        run(lppart(dir.path()).args(["partition", "g.metis", "--k", "4", "--preset", "turbo"]));
    assert_eq!(code, 1);
    assert!(stderr.contains("turbo"), "{stderr}");
    let (code, _, _) = run(lppart(dir.path()).args(["gen", "rgg", "--x", "3", "--out", "x.metis"]));
    assert_eq!(code, 1);
}

#[test]
fn parse_and_io_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, stderr) = run(lppart(dir.path()).args(["partition", "missing.metis", "--k", "2"]));
    assert_eq!(code, 3);
    assert!(stderr.contains("missing.metis"), "{stderr}");

    fs::write(dir.path().join("bad.metis"), "3 5\n2 3\n1 3\n1 2\n").unwrap();
    let (code, _, stderr) = run(lppart(dir.path()).args(["partition", "bad.metis", "--k", "2"]));
    assert_eq!(code, 3);
    assert!(stderr.contains("line 1"), "{stderr}");

    // A partition file whose labels overflow k is a content error.
    write_test_graph(dir.path());
    let labels = planted_labels(300, 4);
    write_partition(&labels, dir.path().join("p.part")).unwrap();
    let (code, _, _) = run(lppart(dir.path()).args(["eval", "g.metis", "p.part", "--k", "2"]));
    assert_eq!(code, 3);
}

#[test]
fn infeasible_results_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("heavy.metis"), "2 1 10\n10 2\n1 1\n").unwrap();
    let args = ["heavy.metis", "--k", "2", "--epsilon", "0"];
    let (code, stdout, _) = run(lppart(dir.path()).arg("partition").args(args).args(["--out", "h.part"]));
    assert_eq!(code, 2);
    assert_eq!(field(&stdout, "feasible"), "false");
    // The partition is still written for inspection.
    assert!(dir.path().join("h.part").exists());
    let (code, _, _) = run(lppart(dir.path()).arg("eval").arg("heavy.metis").arg("h.part").args(&args[1..]));
    assert_eq!(code, 2);
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = run(lppart(dir.path()).args([
        "gen", "rgg", "--x", "4", "--seed", "2", "--out", "rgg.metis",
    ]));
    assert_eq!(code, 0);
    assert_eq!(field(&stdout, "n"), "16");
    let g = read_metis(dir.path().join("rgg.metis")).unwrap();
    assert_eq!(g.n(), 16);

    let (code, _, _) = run(lppart(dir.path()).args([
        "gen", "planted", "--n", "60", "--blocks", "3", "--p-in", "0.5", "--p-out", "0",
        "--seed", "4", "--out", "pl.metis", "--labels-out", "pl.part",
    ]));
    assert_eq!(code, 0);
    // With no cross edges the planted labels cut nothing.
    let (code, stdout, _) =
        run(lppart(dir.path()).args(["eval", "pl.metis", "pl.part", "--k", "3"]));
    assert_eq!(code, 0);
    assert_eq!(field(&stdout, "cut"), "0");
}

#[test]
fn bench_emits_the_aggregated_table() {
    let dir = tempfile::tempdir().unwrap();
    write_test_graph(dir.path());
    fs::write(
        dir.path().join("suite.toml"),
        r#"
repetitions = 3
seed = 1

[[instance]]
name = "rgg"
kind = "rgg"
x = 4
gen_seed = 2
k = 2

[[instance]]
name = "local"
kind = "file"
path = "g.metis"
k = 4
preset = "minimal"
procs = 2
"#,
    )
    .unwrap();
    let (code, stdout, stderr) =
        run(lppart(dir.path()).args(["bench", "suite.toml", "--out", "table.txt"]));
    assert_eq!(code, 0, "{stderr}");
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 3, "{stdout}");
    assert!(lines[0].starts_with("instance=rgg "), "{stdout}");
    assert!(lines[0].contains("reps=3"), "{stdout}");
    assert!(lines[0].contains("best_cut="), "{stdout}");
    assert!(lines[1].starts_with("instance=local "), "{stdout}");
    assert!(lines[2].starts_with("geomean_avg_cut="), "{stdout}");
    assert_eq!(fs::read_to_string(dir.path().join("table.txt")).unwrap(), stdout);

    let (code, _, _) = run(lppart(dir.path()).args(["bench", "nosuite.toml"]));
    assert_eq!(code, 3);
    fs::write(dir.path().join("empty.toml"), "repetitions = 2\n").unwrap();
    let (code, _, _) = run(lppart(dir.path()).args(["bench", "empty.toml"]));
    assert_eq!(code, 3);
}
