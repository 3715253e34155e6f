//! Black-box tests of the command-line binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trisurvey"))
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn stat_value(stats: &str, key: &str) -> String {
    stats
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("missing {key} in:\n{stats}"))
        .to_string()
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

const K4: &str = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

#[test]
fn count_survey_writes_triangles_to_stats() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "k4.edges", K4);
    let stats_path = dir.path().join("stats.txt");
    run_ok(&[
        "--input",
        &input,
        "--survey",
        "count",
        "--ranks",
        "4",
        "--stats",
        stats_path.to_str().unwrap(),
    ]);
    let stats = fs::read_to_string(&stats_path).unwrap();
    assert_eq!(stat_value(&stats, "triangles"), "4");
    assert_eq!(stat_value(&stats, "vertices"), "4");
    assert_eq!(stat_value(&stats, "directed_edges"), "12");
    assert_eq!(stat_value(&stats, "max_degree"), "3");
}

#[test]
fn stats_only_mode_reports_table_columns() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "s5.edges", "9 1\n9 2\n9 3\n9 4\n9 5\n");
    let out = run_ok(&["--input", &star, "--ranks", "2"]);
    let stats = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stat_value(&stats, "vertices"), "6");
    assert_eq!(stat_value(&stats, "directed_edges"), "10");
    assert_eq!(stat_value(&stats, "max_degree"), "5");
    // the center absorbs every edge, so out-degrees stay at 1
    assert_eq!(stat_value(&stats, "max_out_degree"), "1");
}

#[test]
fn empty_input_reports_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.edges", "");
    let out = run_ok(&["--input", &empty, "--ranks", "2"]);
    let stats = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stat_value(&stats, "vertices"), "0");
    assert_eq!(stat_value(&stats, "directed_edges"), "0");
    assert_eq!(stat_value(&stats, "max_degree"), "0");
}

#[test]
fn missing_timestamps_fail_with_edge_in_message() {
    let dir = tempfile::tempdir().unwrap();
    // second edge carries no metadata at all
    let input = write(dir.path(), "k3.edges", "1 2 10\n2 3\n1 3 26\n");
    let out = bin()
        .args(["--input", &input, "--survey", "closure-times"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("edge (2, 3)"), "stderr: {stderr}");
}

#[test]
fn generated_graph_counts_agree_across_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let mut counts = Vec::new();
    for algorithm in ["push", "push-pull"] {
        let stats_path = dir.path().join(format!("{algorithm}.stats"));
        run_ok(&[
            "--generate",
            "rmat",
            "--scale",
            "9",
            "--seed",
            "5",
            "--survey",
            "count",
            "--algorithm",
            algorithm,
            "--ranks",
            "4",
            "--stats",
            stats_path.to_str().unwrap(),
        ]);
        let stats = fs::read_to_string(&stats_path).unwrap();
        counts.push(stat_value(&stats, "triangles"));
    }
    assert_eq!(counts[0], counts[1]);
    assert_ne!(counts[0], "0");
}

#[test]
fn closure_times_writes_joint_and_marginal() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "k3.edges", "1 2 10\n2 3 14\n1 3 26\n");
    let output = dir.path().join("joint.csv");
    run_ok(&[
        "--input",
        &input,
        "--survey",
        "closure-times",
        "--output",
        output.to_str().unwrap(),
    ]);
    let joint = fs::read_to_string(&output).unwrap();
    assert!(joint.contains("2,4,1"), "{joint}");
    let marginal = fs::read_to_string(dir.path().join("joint.csv.marginal")).unwrap();
    assert!(marginal.contains("4,1"), "{marginal}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "k4.edges", K4);
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out_path = dir.path().join(format!("out{run}.csv"));
        run_ok(&[
            "--input",
            &input,
            "--survey",
            "degree-triples",
            "--ranks",
            "3",
            "--output",
            out_path.to_str().unwrap(),
        ]);
        outputs.push(fs::read_to_string(&out_path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
