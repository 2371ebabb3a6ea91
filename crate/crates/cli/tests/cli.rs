//! End-to-end tests of the binary: exit codes, formats, round-trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sia"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn version_names_the_schema() {
    let out = sia(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("matrix-set schema 1"));
}

#[test]
fn classify_identity_and_ones() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_file(
        dir.path(),
        "id.json",
        r#"{"n": 3, "matrices": [[[1,0,0],[0,1,0],[0,0,1]]], "labels": ["I"]}"#,
    );
    let out = sia(&["classify", id.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(
        "I: positive-column=false scrambling=false sarymsakov=false sia=false"
    ));

    let ones = write_file(
        dir.path(),
        "ones.json",
        r#"{"n": 3, "matrices": [[[1,1,1],[1,1,1],[1,1,1]]]}"#,
    );
    let out = sia(&["classify", ones.to_str().unwrap()]);
    assert!(stdout(&out).contains(
        "A: positive-column=true scrambling=true sarymsakov=true sia=true (positive column at power 1)"
    ));
}

#[test]
fn classify_line_automaton_reports_witness_power() {
    let dir = tempfile::tempdir().unwrap();
    let line = dir.path().join("line5.json");
    let out = sia(&["family", "--name", "line", "--n", "5", "-o", line.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = sia(&["classify", line.to_str().unwrap()]);
    assert!(stdout(&out).contains("sia=true (positive column at power 4)"));
}

#[test]
fn family_roundtrips_through_index() {
    let dir = tempfile::tempdir().unwrap();
    let cerny = dir.path().join("cerny4.json");
    sia(&["family", "--name", "cerny", "--n", "4", "-o", cerny.to_str().unwrap()]);

    let out = sia(&["index", cerny.to_str().unwrap(), "--class", "sia"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sia-index = 4"));

    let out = sia(&["index", cerny.to_str().unwrap(), "--class", "pc"]);
    assert!(stdout(&out).contains("pc-index = 9"));

    let wielandt = dir.path().join("w6.json");
    sia(&["family", "--name", "wielandt", "--n", "6", "-o", wielandt.to_str().unwrap()]);
    let out = sia(&["index", wielandt.to_str().unwrap(), "--class", "sia"]);
    assert!(stdout(&out).contains("sia-index = 5"));
}

#[test]
fn index_exit_codes_distinguish_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let swap = write_file(
        dir.path(),
        "swap.json",
        r#"{"n": 2, "matrices": [[[0,1],[1,0]]]}"#,
    );
    let out = sia(&["index", swap.to_str().unwrap(), "--class", "sia"]);
    assert_eq!(out.status.code(), Some(3), "no product exists");
    assert!(stdout(&out).contains("no product"));

    let cerny = dir.path().join("cerny4.json");
    sia(&["family", "--name", "cerny", "--n", "4", "-o", cerny.to_str().unwrap()]);
    let out = sia(&["index", cerny.to_str().unwrap(), "--class", "sia", "--cutoff", "2"]);
    assert_eq!(out.status.code(), Some(2), "not found within cutoff");

    let out = sia(&["index", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "unreadable input");

    let bad = write_file(dir.path(), "bad.json", "{\"n\": 2");
    let out = sia(&["index", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "parse error");

    let out = sia(&["search", "--n", "6"]);
    assert_eq!(out.status.code(), Some(1), "budget exceeded");

    let out = sia(&["family", "--name", "nosuch", "--n", "4"]);
    assert_eq!(out.status.code(), Some(1), "usage error");
}

#[test]
fn numeric_matrices_are_accepted_with_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(
        dir.path(),
        "numeric.json",
        r#"{"n": 2, "matrices": [[[0.999999999, 1e-9], [0.5, 0.5]]]}"#,
    );
    let out = sia(&["classify", file.to_str().unwrap(), "--tolerance", "1e-6"]);
    assert_eq!(out.status.code(), Some(0));
    // with the tolerance the first row keeps a single nonzero
    assert!(stdout(&out).contains("sia=true"));
}

#[test]
fn reduce_3sat_reports_threshold_and_index_matches() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write_file(dir.path(), "f.cnf", "c one satisfiable clause\np cnf 1 1\n1 1 1 0\n");
    let encoded = dir.path().join("f.json");
    let out = sia(&["reduce", "--kind", "3sat", cnf.to_str().unwrap(), "-o", encoded.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&encoded).unwrap()).unwrap();
    assert_eq!(doc["threshold"], 1);
    assert_eq!(doc["n"], 3);

    let out = sia(&["index", encoded.to_str().unwrap(), "--class", "sia"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sia-index = 1"));
}

#[test]
fn reduce_set_cover_encodes_automata() {
    let dir = tempfile::tempdir().unwrap();
    let cover = write_file(
        dir.path(),
        "cover.json",
        r#"{"universe": 2, "sets": [[1], [2]]}"#,
    );
    let encoded = dir.path().join("encoded.json");
    let out = sia(&["reduce", "--kind", "setcover", cover.to_str().unwrap(), "-o", encoded.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&encoded).unwrap()).unwrap();
    assert_eq!(doc["n"], 3);
    assert_eq!(doc["labels"].as_array().unwrap().len(), 2);

    let out = sia(&["index", encoded.to_str().unwrap(), "--class", "sia"]);
    assert!(stdout(&out).contains("sia-index = 2"));

    let empty = write_file(dir.path(), "empty.cnf", "p cnf 1 0\n");
    let out = sia(&["reduce", "--kind", "3sat", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "degenerate formula");
}

#[test]
fn search_output_is_identical_across_worker_counts() {
    let normalize = |out: Output| {
        assert_eq!(out.status.code(), Some(0));
        let mut doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        for summary in doc.as_array_mut().unwrap() {
            summary["wall_time_ms"] = 0.into();
        }
        doc
    };
    let run = |workers: &str| {
        normalize(sia(&[
            "search", "--n", "3", "--n", "4", "--ic", "--workers", workers, "--output", "json",
        ]))
    };
    assert_eq!(run("1"), run("2"));

    // worker count may also come from the environment
    let via_env = Command::new(env!("CARGO_BIN_EXE_sia"))
        .args(["search", "--n", "3", "--n", "4", "--ic", "--output", "json"])
        .env("SIA_WORKERS", "3")
        .output()
        .expect("binary runs");
    assert_eq!(normalize(via_env), run("1"));
}

#[test]
fn search_emits_growth_curve_and_extremal_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let growth = dir.path().join("growth.csv");
    let dumps = dir.path().join("extremal");
    let out = sia(&[
        "search",
        "--n",
        "2",
        "--n",
        "3",
        "--output",
        "csv",
        "--growth-out",
        growth.to_str().unwrap(),
        "--dump-extremal",
        dumps.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("n,set_size,ic_only,max_index,extremal_count,enumerated,wall_time_ms"));
    let curve = std::fs::read_to_string(&growth).unwrap();
    assert_eq!(curve, "n,max_index,2n\n2,1,4\n3,3,6\n");

    let dumped: Vec<_> = std::fs::read_dir(&dumps).unwrap().collect();
    assert!(!dumped.is_empty());
    let first = std::fs::read_to_string(dumped[0].as_ref().unwrap().path()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert!(doc["n"].as_u64().unwrap() >= 2);
}
