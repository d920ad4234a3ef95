use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use acyclic_backdoors::report::{RunReport, Verdict, RUN_REPORT_SCHEMA};
use tempfile::TempDir;

const TRIANGLE: &str = "p cnf 3 3\n1 2 0\n-1 2 0\n1 -2 0\n";

fn fb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fb"))
        .args(args)
        .env_remove("FB_THREADS")
        .output()
        .expect("fb runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn grid(dir: &TempDir, r: usize) -> PathBuf {
    let out = fb(&["gen", "grid", "--r", &r.to_string()]);
    assert!(out.status.success());
    write(dir, &format!("grid{r}.cnf"), &stdout(&out))
}

fn json_report(args: &[&str]) -> (i32, RunReport, serde_json::Value) {
    let mut full = vec!["--json", "--no-timing"];
    full.extend_from_slice(args);
    let out = fb(&full);
    let text = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    let report: RunReport = serde_json::from_str(&text).expect("a run report");
    (out.status.code().unwrap(), report, value)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn assert_schema_valid(value: &serde_json::Value) {
    let schema: serde_json::Value = serde_json::from_str(RUN_REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{value:#}");
}

#[test]
fn grid_has_a_single_variable_strong_backdoor() {
    let dir = TempDir::new().unwrap();
    let cnf = grid(&dir, 3);
    let (code, report, value) = json_report(&["detect", "strong", "--cnf", path(&cnf), "-k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(report.verdict, Some(Verdict::Found));
    assert_eq!(report.backdoor.as_ref().map(|b| b.len()), Some(1));
    assert!(report.is_consistent());
    assert_schema_valid(&value);
}

#[test]
fn weak_detection_reports_a_witness() {
    let dir = TempDir::new().unwrap();
    let cnf = grid(&dir, 3);
    let (code, report, value) = json_report(&["detect", "weak", "--cnf", path(&cnf), "-k", "1"]);
    assert_eq!(code, 0);
    let b = report.backdoor.clone().unwrap();
    let tau = report.witness.clone().unwrap();
    assert_eq!(tau.domain().collect::<std::collections::BTreeSet<_>>(), b);
    assert_eq!(report.parameters.r, Some(3));
    assert!(report.is_consistent());
    assert_schema_valid(&value);
}

#[test]
fn deletion_needs_more_than_one_variable_on_the_grid() {
    let dir = TempDir::new().unwrap();
    let cnf = grid(&dir, 3);
    let (code, report, value) = json_report(&["detect", "deletion", "--cnf", path(&cnf), "-k", "1"]);
    assert_eq!(code, 1);
    assert_eq!(report.verdict, Some(Verdict::No));
    assert!(report.backdoor.is_none());
    assert_schema_valid(&value);
}

#[test]
fn triangle_count_through_a_backdoor() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "tri.cnf", TRIANGLE);
    let (code, report, value) = json_report(&["count", "--cnf", path(&cnf), "--backdoor", "1"]);
    assert_eq!(code, 0);
    let count = report.model_count.clone().unwrap();
    assert_eq!(count.count, 2u32.into());
    assert_eq!(count.universe_size, 3);
    assert_schema_valid(&value);

    let (_, found, _) = json_report(&["count", "--cnf", path(&cnf)]);
    assert_eq!(found.model_count.unwrap().count, 2u32.into());
}

#[test]
fn count_agrees_with_the_oracle() {
    let dir = TempDir::new().unwrap();
    let cnf = grid(&dir, 3);
    let (_, counted, _) = json_report(&["count", "--cnf", path(&cnf)]);
    let (code, oracle, value) = json_report(&["oracle", "--cnf", path(&cnf), "--kind", "count"]);
    assert_eq!(code, 0);
    assert_eq!(
        oracle.oracle.unwrap().count.unwrap(),
        counted.model_count.unwrap().count
    );
    assert_schema_valid(&value);
}

#[test]
fn oracle_lists_all_minimum_sets() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "tri.cnf", TRIANGLE);
    let (code, report, value) =
        json_report(&["oracle", "--cnf", path(&cnf), "--kind", "strong", "--k-max", "2"]);
    assert_eq!(code, 0);
    let oracle = report.oracle.clone().unwrap();
    assert_eq!(oracle.optimum, Some(1));
    assert_eq!(oracle.witness_sets.len(), 2);
    assert!(report.is_consistent());
    assert_schema_valid(&value);

    let (code, _, _) = json_report(&["oracle", "--cnf", path(&cnf), "--kind", "strong", "--k-max", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn verify_exit_codes_follow_the_verdict() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "tri.cnf", TRIANGLE);
    let (yes, report, value) = json_report(&["verify", "--cnf", path(&cnf), "--kind", "weak", "--set", "1"]);
    assert_eq!(yes, 0);
    assert_eq!(report.verdict, Some(Verdict::True));
    assert!(report.witness.is_some());
    assert_schema_valid(&value);

    let (no, report, _) = json_report(&["verify", "--cnf", path(&cnf), "--kind", "deletion", "--set", "3"]);
    assert_eq!(no, 1);
    assert_eq!(report.verdict, Some(Verdict::False));
}

#[test]
fn stats_report_is_schema_valid() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "tri.cnf", TRIANGLE);
    let (code, report, value) = json_report(&["stats", "--cnf", path(&cnf)]);
    assert_eq!(code, 0);
    assert_eq!((report.statistics.n, report.statistics.m, report.statistics.length), (3, 3, 6));
    assert_eq!(report.statistics.acyclic, Some(false));
    assert_schema_valid(&value);
}

#[test]
fn timing_is_reported_unless_disabled() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "tri.cnf", TRIANGLE);
    let out = fb(&["--json", "stats", "--cnf", path(&cnf)]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(value["wall_time_ms"].as_f64().is_some());
    assert_schema_valid(&value);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.cnf", "p cnf 2 1\n1 x 0\n");
    assert_eq!(fb(&["stats", "--cnf", path(&bad)]).status.code(), Some(2));

    let missing = dir.path().join("missing.cnf");
    assert_eq!(fb(&["stats", "--cnf", path(&missing)]).status.code(), Some(2));

    let wide = write(&dir, "wide.cnf", "p cnf 4 1\n1 2 3 4 0\n");
    let out = fb(&["detect", "weak", "--cnf", path(&wide), "-k", "1", "-r", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn resource_guards_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let cnf = grid(&dir, 3);
    assert_eq!(fb(&["detect", "strong", "--cnf", path(&cnf), "-k", "7"]).status.code(), Some(3));
    assert_eq!(
        fb(&["oracle", "--cnf", path(&cnf), "--kind", "weak", "--k-max", "9"]).status.code(),
        Some(3)
    );
}

#[test]
fn reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fb"))
        .args(["count", "--cnf", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(TRIANGLE.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("models: 2 over 3 variables"));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = TempDir::new().unwrap();
    let gen = |seed: &str| stdout(&fb(&["gen", "random", "--n", "10", "--m", "16", "--seed", seed]));
    assert_eq!(gen("7"), gen("7"));
    let cnf = write(&dir, "rand.cnf", &gen("7"));
    let g4 = grid(&dir, 4);
    for args in [
        vec!["detect", "strong", "--cnf", path(&cnf), "-k", "2"],
        vec!["detect", "weak", "--cnf", path(&cnf), "-k", "2"],
        vec!["detect", "strong", "--cnf", path(&g4), "-k", "1"],
        vec!["count", "--cnf", path(&cnf)],
    ] {
        let run = |threads: &str| {
            let mut full = vec!["--json", "--no-timing", "--threads", threads];
            full.extend_from_slice(&args);
            fb(&full).stdout
        };
        let single = run("1");
        assert_eq!(single, run("4"), "{args:?}");
        assert_eq!(single, run("4"), "{args:?}");
    }
}

#[test]
fn hitting_set_encoding_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = fb(&["gen", "hitting", "--sets", "1,2;2,3;3,4"]);
    assert!(out.status.success());
    let cnf = write(&dir, "hs.cnf", &stdout(&out));
    let (code, report, _) = json_report(&["detect", "weak", "--cnf", path(&cnf), "-k", "2"]);
    assert_eq!(code, 0);
    assert!(report.backdoor.unwrap().len() <= 2);
    let (code, _, _) = json_report(&["detect", "weak", "--cnf", path(&cnf), "-k", "1"]);
    assert_eq!(code, 1);
}
