//! End-to-end tests of the `frieze` binary: output formats, exit codes,
//! determinism, and the on-disk cache.

use std::collections::HashSet;
use std::process::{Command, Output};

use frieze_core::FriezeWindow;

fn frieze(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frieze"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

#[test]
fn count_both_cross_checks_and_exits_zero() {
    let out = frieze(&["count", "tame", "--n", "5", "--m", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["formula"]["count"], "2084");
    assert_eq!(v["enumerated"]["count"], "2084");
    assert_eq!(v["formula"]["method"], "formula");
    assert_eq!(v["enumerated"]["method"], "transfer-matrix");
    assert_eq!(v["match"], true);
    assert_eq!(v["formula"]["query"]["kind"], "tame");
}

#[test]
fn count_single_method_emits_one_report() {
    let out = frieze(&[
        "count", "regular", "--n", "2", "--m", "4", "--method", "formula",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["count"], "3");
    assert_eq!(v["query"]["n"], 2);
}

#[test]
fn count_rejects_out_of_range_parameters() {
    for args in [
        vec!["count", "tame", "--n", "5", "--m", "1"],
        vec!["count", "tame", "--n", "1", "--m", "4"],
        vec!["count", "tame", "--n", "31", "--m", "4"],
    ] {
        let out = frieze(&args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
    }
    // The bound lifts with the explicit opt-in flag.
    let out = frieze(&["count", "tame", "--n", "31", "--m", "2", "--unsafe-large"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn table_csv_has_fixed_schema_and_all_rows_match() {
    let out = frieze(&["table", "tame", "--n-max", "4", "--m-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,n,m,formula,enumerated,match");
    assert_eq!(lines.len(), 1 + 9);
    for line in &lines[1..] {
        assert!(line.starts_with("tame,"), "row: {line}");
        assert!(line.ends_with(",true"), "row: {line}");
    }
}

#[test]
fn table_json_is_an_array_of_report_pairs() {
    let out = frieze(&[
        "table", "regular", "--n-max", "3", "--m-max", "4", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert!(row["formula"]["count"].is_string());
        assert!(row["enumerated"]["count"].is_string());
        assert_eq!(row["match"], true);
    }
}

#[test]
fn graph_dot_is_stable_and_counts_are_right() {
    let first = frieze(&["graph", "--n", "2"]);
    let second = frieze(&["graph", "--n", "2"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_of(&first);
    let nodes = text
        .lines()
        .filter(|l| l.contains(';') && !l.contains("->"))
        .count();
    let arcs = text.lines().filter(|l| l.contains("->")).count();
    assert_eq!(nodes, 3);
    assert_eq!(arcs, 6);
}

#[test]
fn graph_json_lists_labeled_vertices() {
    let out = frieze(&["graph", "--n", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let vertices = v["vertices"].as_array().unwrap();
    assert_eq!(vertices.len(), 24);
    for label in vertices {
        let s = label.as_str().unwrap();
        assert!(s.split_once('/').is_some(), "label: {s}");
    }
    assert_eq!(v["n"], 5);
    assert_eq!(v["edges"].as_array().unwrap().len(), 120);
}

#[test]
fn graph_rejects_bad_modulus() {
    assert_eq!(frieze(&["graph", "--n", "1"]).status.code(), Some(2));
    assert_eq!(frieze(&["graph", "--n", "31"]).status.code(), Some(2));
}

#[test]
fn render_indices_cover_every_window_with_uniform_multiplicity() {
    // The six semiclosed paths for n=2, m=4 fall onto the three regular
    // windows in fibers of size n=2: the path-to-window map is n-to-1, which
    // is exactly why the window count is the path count divided by n.
    let mut seen: Vec<String> = Vec::new();
    for i in 0..6 {
        let out = frieze(&["render", "--n", "2", "--m", "4", "--index", &i.to_string()]);
        assert_eq!(out.status.code(), Some(0), "index {i}");
        let text = stdout_of(&out);
        let window = FriezeWindow::from_text(&text).expect("output re-parses");
        assert!(window.check_diamond().is_empty());
        assert!(window.check_tame().is_empty());
        assert!(window.check_boundary().is_empty());
        assert!(window.is_regular());
        seen.push(text);
    }
    let distinct: HashSet<&String> = seen.iter().collect();
    assert_eq!(distinct.len(), 3);
    for window in &distinct {
        assert_eq!(seen.iter().filter(|t| t == window).count(), 2);
    }
    // One past the last path index is a usage error.
    let out = frieze(&["render", "--n", "2", "--m", "4", "--index", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn render_seed_selection_is_deterministic() {
    let a = frieze(&["render", "--n", "5", "--m", "4", "--seed", "9"]);
    let b = frieze(&["render", "--n", "5", "--m", "4", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    // Index and seed cannot be combined.
    let conflict = frieze(&[
        "render", "--n", "5", "--m", "4", "--seed", "9", "--index", "0",
    ]);
    assert_eq!(conflict.status.code(), Some(2));
}

#[test]
fn render_json_carries_window_fields() {
    let out = frieze(&["render", "--n", "3", "--m", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["m"], 3);
    assert_eq!(v["period"], 6);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_single_suite_emits_json_report() {
    let out = frieze(&["verify", "--suite", "crt"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["suite"], "crt");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["ok"], true);
    assert_eq!(v["failed"], 0);
    assert!(!v["checks"].as_array().unwrap().is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("suite crt:"), "stderr: {err}");
}

#[test]
fn verify_repeated_runs_are_byte_identical() {
    let a = frieze(&["verify", "--suite", "lemma4", "--seed", "7"]);
    let b = frieze(&["verify", "--suite", "lemma4", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_rejects_oversized_ranges_without_opt_in() {
    let out = frieze(&["verify", "--suite", "theorem-a", "--n-max", "13"]);
    assert_eq!(out.status.code(), Some(2));
    let out = frieze(&["verify", "--suite", "recurrence", "--k-max", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_flag_requires_env_and_hits_are_identical() {
    let no_env = Command::new(env!("CARGO_BIN_EXE_frieze"))
        .args(["count", "tame", "--n", "5", "--m", "6", "--cache"])
        .env_remove("FRIEZE_CACHE_DIR")
        .output()
        .unwrap();
    assert_eq!(no_env.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_frieze"))
            .args(["count", "regular", "--n", "12", "--m", "5", "--cache"])
            .env("FRIEZE_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let miss = run();
    assert_eq!(miss.status.code(), Some(0));
    let cache_file = dir.path().join("counts.json");
    assert!(cache_file.exists());
    let stored = std::fs::read_to_string(&cache_file).unwrap();
    assert!(
        stored.contains("regular:n=12:m=5:formula"),
        "cache: {stored}"
    );
    assert!(stored.contains("\"200\""), "cache: {stored}");
    let hit = run();
    assert_eq!(hit.status.code(), Some(0));
    assert_eq!(miss.stdout, hit.stdout);
}

#[test]
fn usage_errors_exit_with_code_two() {
    assert_eq!(frieze(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        frieze(&["render", "--n", "5", "--m", "4", "--periods", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        frieze(&["table", "tame", "--n-max", "13", "--m-max", "4"])
            .status
            .code(),
        Some(2)
    );
}
