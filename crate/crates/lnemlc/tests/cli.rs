use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const QUICK: &str = "[line]\nsample_budget = 20000\n\n[forest]\ntrees = 10\n";

fn lnemlc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lnemlc")).args(args).output().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn ok(out: Output) -> Output {
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    out
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    /// Synthetic train/test pair with 6 labels plus a quick config file.
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let ws = Workspace { dir };
        ok(lnemlc(&[
            "synth",
            "--samples",
            "120",
            "--features",
            "5",
            "--labels",
            "6",
            "--seed",
            "2",
            "--test-samples",
            "40",
            "--out",
            ws.s("train.arff"),
            "--test-out",
            ws.s("test.arff"),
        ]));
        std::fs::write(ws.path("quick.toml"), QUICK).unwrap();
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn s(&self, name: &str) -> &'static str {
        // leaked so argument lists stay plain string slices
        Box::leak(self.path(name).display().to_string().into_boxed_str())
    }
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&read(path)).unwrap()
}

fn without_timings(csv: &str) -> Vec<Vec<String>> {
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let skip: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.ends_with("_us"))
        .map(|(i, _)| i)
        .collect();
    assert_eq!(skip.len(), 2);
    csv.lines()
        .map(|l| {
            l.split(',')
                .enumerate()
                .filter(|(i, _)| !skip.contains(i))
                .map(|(_, v)| v.to_string())
                .collect()
        })
        .collect()
}

#[test]
fn train_writes_bundle_with_auto_dimension() {
    let ws = Workspace::new();
    ok(lnemlc(&[
        "train", "--data", ws.s("train.arff"), "--labels", "6", "--config", ws.s("quick.toml"), "--out", ws.s("model"),
    ]));
    let manifest = json(&ws.path("model/manifest.json"));
    assert_eq!(manifest["metadata"]["dimension"], 32);
    assert_eq!(manifest["run_manifest"], "run-manifest.json");
    let run = json(&ws.path("model/run-manifest.json"));
    assert_eq!(run["command"], "train");
    assert_eq!(run["seed"], 0);
    assert!(run["datasets"][0].as_str().unwrap().ends_with("train.arff"));
    assert!(!run["tool_version"].as_str().unwrap().is_empty());
}

#[test]
fn evaluate_is_deterministic_apart_from_timings() {
    let ws = Workspace::new();
    ok(lnemlc(&[
        "train", "--data", ws.s("train.arff"), "--labels", "6", "--config", ws.s("quick.toml"), "--seed", "7", "--out",
        ws.s("model"),
    ]));
    let mut reports = Vec::new();
    for run in ["a", "b"] {
        let out = ws.s(run);
        ok(lnemlc(&[
            "evaluate", "--model-dir", ws.s("model"), "--test", ws.s("test.arff"), "--baseline", "--threads", "1", "--out",
            out,
        ]));
        reports.push(without_timings(&read(&ws.path(run).join("report.csv"))));
    }
    assert_eq!(reports[0], reports[1]);
    // baseline plus the model, each in exact and regressed mode
    let rows = &reports[0];
    assert_eq!(rows.len(), 1 + 4);
    let modes: Vec<(&str, &str)> = rows[1..].iter().map(|r| (r[0].as_str(), r[10].as_str())).collect();
    assert_eq!(modes, [("0", "exact"), ("0", "regressed"), ("1", "exact"), ("1", "regressed")]);
    let report = json(&ws.path("a/report.json"));
    assert_eq!(report["run_manifest"], "run-manifest.json");
    assert!(ws.path("a/run-manifest.json").exists());
}

#[test]
fn evaluate_without_bundle_matches_bundle_path() {
    let ws = Workspace::new();
    let common = ["--config", ws.s("quick.toml"), "--seed", "3"];
    let mut args = vec!["train", "--data", ws.s("train.arff"), "--labels", "6", "--out", ws.s("model")];
    args.extend(common);
    ok(lnemlc(&args));
    ok(lnemlc(&["evaluate", "--model-dir", ws.s("model"), "--test", ws.s("test.arff"), "--out", ws.s("a")]));
    let mut args = vec![
        "evaluate", "--data", ws.s("train.arff"), "--labels", "6", "--test", ws.s("test.arff"), "--out", ws.s("b"),
    ];
    args.extend(common);
    ok(lnemlc(&args));
    assert_eq!(
        without_timings(&read(&ws.path("a/report.csv"))),
        without_timings(&read(&ws.path("b/report.csv")))
    );
}

#[test]
fn sweep_writes_one_long_row_per_combination_mode_fold_and_measure() {
    let ws = Workspace::new();
    let grid = format!("{QUICK}\n[grid]\norders = [\"1\", \"2\"]\naggregations = [\"sum\", \"mean\"]\n");
    std::fs::write(ws.path("grid.toml"), grid).unwrap();
    ok(lnemlc(&[
        "sweep", "--data", ws.s("train.arff"), "--labels", "6", "--config", ws.s("grid.toml"), "--folds", "3", "--baseline",
        "--measures", "micro_f1,hamming_loss", "--out", ws.s("sweep"),
    ]));
    let csv = read(&ws.path("sweep/sweep.csv"));
    assert_eq!(csv.lines().count(), 1 + (4 + 1) * 3 * 2);
    let folds = read(&ws.path("sweep/folds.csv"));
    assert_eq!(folds.lines().count(), 1 + 120);
}

#[test]
fn helper_commands_write_their_files() {
    let ws = Workspace::new();
    let data = ["--data", ws.s("train.arff"), "--labels", "6"];
    let mut args = vec!["graph", "--weighted", "--out", ws.s("g/edges.txt")];
    args.extend(data);
    ok(lnemlc(&args));
    assert!(read(&ws.path("g/edges.txt")).lines().count() >= 6);
    let mut args = vec!["stratify", "--folds", "4", "--out", ws.s("g/folds.csv")];
    args.extend(data);
    ok(lnemlc(&args));
    let mut args = vec![
        "embed", "--embedder", "node2vec", "--dim", "8", "--config", ws.s("quick.toml"), "--walks", ws.s("g/walks.txt"),
        "--out", ws.s("g/emb.txt"),
    ];
    args.extend(data);
    ok(lnemlc(&args));
    let emb = read(&ws.path("g/emb.txt"));
    assert_eq!(emb.lines().next().unwrap().trim(), "6 8");
    assert!(ws.path("g/walks.txt").exists());
    assert!(ws.path("g/run-manifest.json").exists());
}

#[test]
fn invalid_dimension_is_a_configuration_error() {
    let ws = Workspace::new();
    let out = lnemlc(&["train", "--data", ws.s("train.arff"), "--labels", "6", "--dim", "7", "--out", ws.s("m")]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains('7'), "{}", stderr(&out));
    assert!(!ws.path("m").exists());
}

#[test]
fn missing_file_is_an_io_error_naming_the_path() {
    let ws = Workspace::new();
    let missing = ws.s("nope.arff");
    let out = lnemlc(&["train", "--data", missing, "--labels", "6", "--out", ws.s("m")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains(missing), "{}", stderr(&out));
    let out = lnemlc(&["train", "--data", ws.s("train.arff"), "--labels", "6", "--config", ws.s("no.toml"), "--out", ws.s("m")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_inputs_are_parse_errors() {
    let ws = Workspace::new();
    std::fs::write(ws.path("bad.arff"), "@relation r\n@attribute a numeric\n@data\n1,2\n").unwrap();
    let out = lnemlc(&["train", "--data", ws.s("bad.arff"), "--labels", "1", "--out", ws.s("m")]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    std::fs::write(ws.path("bad.toml"), "colour = \"blue\"\n").unwrap();
    let out = lnemlc(&["train", "--data", ws.s("train.arff"), "--labels", "6", "--config", ws.s("bad.toml"), "--out", ws.s("m")]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("bad.toml"));
}

#[test]
fn schema_mismatch_and_usage_errors() {
    let ws = Workspace::new();
    ok(lnemlc(&[
        "synth", "--samples", "30", "--features", "4", "--labels", "6", "--out", ws.s("other.arff"),
    ]));
    ok(lnemlc(&[
        "train", "--data", ws.s("train.arff"), "--labels", "6", "--config", ws.s("quick.toml"), "--out", ws.s("model"),
    ]));
    let out = lnemlc(&["evaluate", "--model-dir", ws.s("model"), "--test", ws.s("other.arff"), "--out", ws.s("e")]);
    assert_eq!(out.status.code(), Some(6), "{}", stderr(&out));
    assert_eq!(lnemlc(&[]).status.code(), Some(2));
    assert_eq!(lnemlc(&["train", "--labels", "6"]).status.code(), Some(2));
}

#[test]
fn regressed_mode_without_regressor_is_rejected() {
    let ws = Workspace::new();
    let out = lnemlc(&[
        "evaluate", "--data", ws.s("train.arff"), "--labels", "6", "--test", ws.s("test.arff"), "--regressor", "none",
        "--config", ws.s("quick.toml"), "--mode", "regressed", "--out", ws.s("e"),
    ]);
    assert_eq!(out.status.code(), Some(5), "{}", stderr(&out));
    assert!(!ws.path("e/report.csv").exists());
}
