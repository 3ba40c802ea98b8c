//! End-to-end tests of the `enumpace` binary: every subcommand is driven
//! through a real process, with file outputs and exit codes pinned against
//! hand-computed fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const P3_EDGES: &str = "3 2\n0 1\n1 2\n";

/// Structured profile with `scale = 2`, `a = 1`: emissions at cumulative
/// cost 2, 6, 12, 20.
const QUAD_SPEC: &str =
    r#"{"n":1,"k":1,"a":1,"m":4,"profile":"structured","t_const":2,"p_coeffs":[1]}"#;

/// Front-loaded profile with `scale = 5`: emissions at cost 6 through 10.
const FRONT_SPEC: &str =
    r#"{"n":1,"k":1,"a":0,"m":5,"profile":"front_loaded","t_const":5,"p_coeffs":[1]}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_enumpace"))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("fixture write");
    path
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_str(&stdout_of(output)).expect("stdout parses as JSON")
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).expect("report exists");
    serde_json::from_str(&text).expect("report parses as JSON")
}

#[test]
fn enumerate_prints_the_single_cover() {
    let dir = TempDir::new().unwrap();
    let graph = write_file(dir.path(), "p3.txt", P3_EDGES);
    let output = bin()
        .args(["enumerate", "--problem", "vertex-cover", "--k", "1"])
        .arg("--graph")
        .arg(&graph)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    assert_eq!(stdout_of(&output), "010\n");
}

#[test]
fn enumerate_writes_trace_and_report() {
    let dir = TempDir::new().unwrap();
    let spec = write_file(dir.path(), "quad.json", QUAD_SPEC);
    let trace = dir.path().join("trace.csv");
    let report = dir.path().join("report.json");
    let output = bin()
        .args(["enumerate", "--problem", "synthetic"])
        .arg("--spec")
        .arg(&spec)
        .arg("--trace-out")
        .arg(&trace)
        .arg("--report-out")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    assert_eq!(
        stdout_of(&output),
        "sol_000000000001\nsol_000000000002\nsol_000000000003\nsol_000000000004\n"
    );
    assert_eq!(
        std::fs::read_to_string(&trace).unwrap(),
        "i,delay,cum_cost\n0,2,2\n1,4,6\n2,6,12\n3,8,20\n4,0,20\n"
    );
    let report = read_json(&report);
    assert_eq!(report["schema_version"], "1");
    assert_eq!(report["problem"], "synthetic");
    assert_eq!(report["solutions"], 4);
    assert_eq!(report["total_cost"], 20);
    assert_eq!(report["pass"], true);
    assert_eq!(report["trace_csv"], trace.display().to_string());
    let digest = report["instance_digest"].as_str().unwrap();
    assert_eq!(digest.len(), 16);
    assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
}

#[test]
fn missing_input_is_a_plain_failure() {
    let output = bin()
        .args(["enumerate", "--problem", "vertex-cover", "--k", "1"])
        .args(["--graph", "/nonexistent/p3.txt"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_of(&output).contains("cannot read"));
}

#[test]
fn conflicting_problem_flags_are_rejected() {
    let dir = TempDir::new().unwrap();
    let spec = write_file(dir.path(), "quad.json", QUAD_SPEC);
    let graph = write_file(dir.path(), "p3.txt", P3_EDGES);
    let output = bin()
        .args(["enumerate", "--problem", "synthetic"])
        .arg("--spec")
        .arg(&spec)
        .arg("--graph")
        .arg(&graph)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_of(&output).contains("--graph applies to --problem vertex-cover"));
}

#[test]
fn regularize_buffers_a_front_loaded_burst() {
    let dir = TempDir::new().unwrap();
    let spec = write_file(dir.path(), "front.json", FRONT_SPEC);
    // Thresholds 10 * i^2; the raw run finishes at cost 10, inside the
    // first threshold, so the queue starts at its deepest.
    let schedule = write_file(
        dir.path(),
        "sched.json",
        r#"{"t_const":10,"p_coeffs":[1],"exponent":2}"#,
    );
    let queue = dir.path().join("queue.csv");
    let trace = dir.path().join("trace.csv");
    let report = dir.path().join("report.json");
    let output = bin()
        .args(["regularize", "--problem", "synthetic"])
        .arg("--spec")
        .arg(&spec)
        .arg("--schedule")
        .arg(&schedule)
        .arg("--queue-out")
        .arg(&queue)
        .arg("--trace-out")
        .arg(&trace)
        .arg("--report-out")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    assert_eq!(
        std::fs::read_to_string(&queue).unwrap(),
        "i,queue_size\n1,5\n2,4\n3,3\n4,2\n5,1\n"
    );
    // First release pays the whole raw run plus one extraction; the drain
    // then releases one solution per two ticks.
    assert_eq!(
        std::fs::read_to_string(&trace).unwrap(),
        "i,delay,cum_cost\n0,12,12\n1,2,14\n2,2,16\n3,2,18\n4,2,20\n5,0,20\n"
    );
    let report = read_json(&report);
    assert_eq!(report["memory"]["max_queue"], 5);
    assert_eq!(report["memory"]["samples"], 5);
    assert_eq!(report["pass"], true);
}

#[test]
fn regularize_reports_a_broken_declaration() {
    let dir = TempDir::new().unwrap();
    // Emissions at cost 11 through 15 against a constant threshold of 11:
    // the second release window is already spent when the first closes.
    let spec = write_file(
        dir.path(),
        "slow.json",
        r#"{"n":1,"k":1,"a":0,"m":5,"profile":"front_loaded","t_const":10,"p_coeffs":[1]}"#,
    );
    let schedule = write_file(
        dir.path(),
        "tight.json",
        r#"{"t_const":11,"p_coeffs":[1],"exponent":0}"#,
    );
    let report = dir.path().join("report.json");
    let output = bin()
        .args(["regularize", "--problem", "synthetic"])
        .arg("--spec")
        .arg(&spec)
        .arg("--schedule")
        .arg(&schedule)
        .arg("--report-out")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("declared bound violated at emission index 2"));
    let report = read_json(&report);
    assert_eq!(report["pass"], false);
    assert_eq!(report["error"], "declared bound violated at emission index 2");
    assert_eq!(report["solutions"], 1);
    assert_eq!(report["total_cost"], 13);
}

#[test]
fn regularize_calibrates_a_schedule_from_a_probe() {
    let dir = TempDir::new().unwrap();
    let spec = write_file(dir.path(), "front.json", FRONT_SPEC);
    let queue = dir.path().join("queue.csv");
    let output = bin()
        .args(["regularize", "--problem", "synthetic", "--exponent", "2"])
        .arg("--spec")
        .arg(&spec)
        .arg("--queue-out")
        .arg(&queue)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    // ceil(6 / 1) dominates ceil(7 / 4) and the later emissions.
    assert!(stderr_of(&output).contains("calibrated schedule: 6 * i^2"));
    assert_eq!(
        std::fs::read_to_string(&queue).unwrap(),
        "i,queue_size\n1,1\n2,4\n3,3\n4,2\n5,1\n"
    );
}

#[test]
fn compare_matches_brute_force() {
    let dir = TempDir::new().unwrap();
    let graph = write_file(dir.path(), "p3.txt", P3_EDGES);
    let output = bin()
        .args(["compare", "--problem", "vertex-cover", "--k", "2"])
        .arg("--graph")
        .arg(&graph)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    assert_eq!(stdout_of(&output), "MATCH: 4 solutions\n");
}

#[test]
fn roundtrip_counts_one_call_per_solution_plus_probe() {
    let dir = TempDir::new().unwrap();
    let graph = write_file(dir.path(), "p3.txt", P3_EDGES);
    let output = bin()
        .args(["roundtrip", "--problem", "vertex-cover", "--k", "2"])
        .arg("--graph")
        .arg(&graph)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    let summary = stdout_json(&output);
    assert_eq!(summary["pass"], true);
    assert_eq!(summary["solutions"], 4);
    assert_eq!(summary["oracle_calls"], 5);
    assert_eq!(summary["ticks_total"], 9);
}

#[test]
fn fit_recovers_a_planted_quadratic() {
    let dir = TempDir::new().unwrap();
    let spec = write_file(
        dir.path(),
        "planted.json",
        r#"{"n":1,"k":1,"a":2,"m":400,"profile":"structured","t_const":3,"p_coeffs":[1]}"#,
    );
    let trace = dir.path().join("trace.csv");
    let status = bin()
        .args(["enumerate", "--problem", "synthetic"])
        .arg("--spec")
        .arg(&spec)
        .arg("--trace-out")
        .arg(&trace)
        .arg("--solutions-out")
        .arg(dir.path().join("sols.txt"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let output = bin().arg("fit").arg("--trace").arg(&trace).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    let fit = stdout_json(&output);
    let exponent = fit["exponent_hat"].as_f64().unwrap();
    assert!((exponent - 2.0).abs() < 0.1, "exponent_hat = {exponent}");
    assert!(fit["r_squared"].as_f64().unwrap() > 0.999);
    assert_eq!(fit["index_range"], serde_json::json!([8, 400]));
    // Only the trailing zero postcomputation delay falls out of the window.
    assert_eq!(fit["excluded_zero_delays"], 1);
}

#[test]
fn check_splits_pass_and_violation_exit_codes() {
    let dir = TempDir::new().unwrap();
    let spec = write_file(
        dir.path(),
        "planted.json",
        r#"{"n":1,"k":1,"a":2,"m":400,"profile":"structured","t_const":3,"p_coeffs":[1]}"#,
    );
    let trace = dir.path().join("trace.csv");
    let status = bin()
        .args(["enumerate", "--problem", "synthetic"])
        .arg("--spec")
        .arg(&spec)
        .arg("--trace-out")
        .arg(&trace)
        .arg("--solutions-out")
        .arg(dir.path().join("sols.txt"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    // Delay i is 3 * (i + 1)^2, at most 12 * i^2 from index 1 on.
    let output = bin()
        .args(["check", "--kind", "delay", "--scale", "12", "--exponent", "2"])
        .arg("--trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
    let verdict = stdout_json(&output);
    assert_eq!(verdict["pass"], true);
    assert_eq!(verdict["max_ratio"], 1.0);

    let output = bin()
        .args(["check", "--kind", "delay", "--scale", "3", "--exponent", "2"])
        .arg("--trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let verdict = stdout_json(&output);
    assert_eq!(verdict["pass"], false);
    assert_eq!(verdict["first_violation"], 1);
    assert_eq!(verdict["max_ratio"], 4.0);
}

#[test]
fn cost_cap_env_var_applies_when_no_flag() {
    let dir = TempDir::new().unwrap();
    let spec = write_file(dir.path(), "quad.json", QUAD_SPEC);
    let output = bin()
        .args(["enumerate", "--problem", "synthetic"])
        .arg("--spec")
        .arg(&spec)
        .env("ENUM_COST_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_of(&output).contains("cost cap of 10 ticks exhausted"));

    // An explicit flag wins over the environment.
    let output = bin()
        .args(["enumerate", "--problem", "synthetic", "--cost-cap", "100"])
        .arg("--spec")
        .arg(&spec)
        .env("ENUM_COST_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
}

#[test]
fn reruns_are_byte_identical() {
    let mut passes: Vec<(Vec<u8>, Vec<u8>, Vec<u8>)> = Vec::new();
    for _ in 0..2 {
        let dir = TempDir::new().unwrap();
        write_file(dir.path(), "quad.json", QUAD_SPEC);
        // Relative output paths keep the embedded trace path identical
        // across the two working directories.
        let output = bin()
            .current_dir(dir.path())
            .args(["enumerate", "--problem", "synthetic"])
            .args(["--spec", "quad.json"])
            .args(["--trace-out", "trace.csv"])
            .args(["--report-out", "report.json"])
            .args(["--solutions-out", "sols.txt"])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0), "{}", stderr_of(&output));
        passes.push((
            std::fs::read(dir.path().join("trace.csv")).unwrap(),
            std::fs::read(dir.path().join("report.json")).unwrap(),
            std::fs::read(dir.path().join("sols.txt")).unwrap(),
        ));
    }
    assert_eq!(passes[0], passes[1]);
}

#[test]
fn help_and_version_exit_zero() {
    let help = bin().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout_of(&help).contains("enumerate"));
    let version = bin().arg("--version").output().unwrap();
    assert_eq!(version.status.code(), Some(0));
    assert!(stdout_of(&version).starts_with("enumpace"));
}
