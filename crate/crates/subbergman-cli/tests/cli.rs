//! End-to-end tests of the installed binary: flag parsing, job files, exit
//! codes, output targets and byte-level determinism.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subbergman"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| {
        panic!(
            "stderr is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("subbergman-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn kernel_eval_reproduces_the_worked_value() {
    let out = run(&["kernel-eval", "--s", "2", "--z", "0.5", "--w", "0.5"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let value = &v["payload"]["value"];
    assert!((value["re"].as_f64().unwrap() - 16.0 / 9.0).abs() < 1e-12);
    assert_eq!(v["command"], "kernel-eval");
    assert_eq!(v["tool"], "subbergman");
    let check = &v["payload"]["series_check"];
    assert!(check["difference"].as_f64().unwrap() < 1e-9);
}

#[test]
fn pick_test_reports_the_expected_verdict() {
    let out = run(&["pick-test", "--s", "2", "--points", "0.5;-0.5"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["payload"]["verdict"], "NOT_PSD");
}

#[test]
fn missing_kernel_parameters_exit_with_validation_error() {
    let out = run(&["kernel-eval", "--z", "0.5", "--w", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let e = stderr_json(&out);
    assert_eq!(e["error"]["kind"], "validation");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_flags_exit_with_usage_error() {
    let out = run(&["kernel-eval", "--does-not-exist", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let e = stderr_json(&out);
    assert_eq!(e["error"]["kind"], "usage");
}

#[test]
fn help_exits_cleanly() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("kernel-eval"));
}

#[test]
fn job_file_and_flags_agree_byte_for_byte() {
    let job_path = temp_path("job.json");
    std::fs::write(
        &job_path,
        r#"{
            "command": "pick-test",
            "s": 2.0,
            "points": [0.5, -0.5],
            "z0": 0.0
        }"#,
    )
    .unwrap();
    let from_file = run(&["pick-test", "--job", job_path.to_str().unwrap()]);
    let from_flags = run(&["pick-test", "--s", "2", "--points", "0.5;-0.5"]);
    std::fs::remove_file(&job_path).ok();
    assert!(from_file.status.success());
    let a = stdout_json(&from_file);
    let b = stdout_json(&from_flags);
    assert_eq!(a["payload"], b["payload"]);
    assert_eq!(a["job"], b["job"]);
}

#[test]
fn job_file_with_wrong_command_is_rejected() {
    let job_path = temp_path("wrong-command.json");
    std::fs::write(
        &job_path,
        r#"{"command": "pick-test", "s": 2.0, "points": [0.5]}"#,
    )
    .unwrap();
    let out = run(&["kernel-eval", "--job", job_path.to_str().unwrap()]);
    std::fs::remove_file(&job_path).ok();
    assert_eq!(out.status.code(), Some(1));
    let e = stderr_json(&out);
    assert_eq!(e["error"]["kind"], "validation");
}

#[test]
fn job_file_cannot_be_mixed_with_parameter_flags() {
    let job_path = temp_path("mixed.json");
    std::fs::write(
        &job_path,
        r#"{"command": "pick-test", "s": 2.0, "points": [0.5]}"#,
    )
    .unwrap();
    let out = run(&[
        "pick-test",
        "--job",
        job_path.to_str().unwrap(),
        "--s",
        "3",
    ]);
    std::fs::remove_file(&job_path).ok();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seeded_payloads_are_byte_identical_across_runs() {
    let args = [
        "witness-search",
        "--zeros",
        "0;0.4",
        "--alpha",
        "0",
        "--n-points",
        "3",
        "--trials",
        "50",
        "--seed",
        "7",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    let a = stdout_json(&first);
    let b = stdout_json(&second);
    assert_eq!(
        serde_json::to_string(&a["payload"]).unwrap(),
        serde_json::to_string(&b["payload"]).unwrap()
    );
}

#[test]
fn out_and_csv_files_are_written() {
    let out_path = temp_path("report.json");
    let csv_path = temp_path("trace.csv");
    let out = run(&[
        "boundary-probe",
        "--gap-terms",
        "20",
        "--theta",
        "0.7",
        "--depth",
        "12",
        "--out",
        out_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["command"], "boundary-probe");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("curve,step,z_re,z_im,value_re,value_im"));
    assert!(lines.count() > 10);
    std::fs::remove_file(&out_path).ok();
    std::fs::remove_file(&csv_path).ok();
}

#[test]
fn csv_is_refused_when_the_command_has_no_table() {
    let csv_path = temp_path("no-table.csv");
    let out = run(&[
        "pick-test",
        "--s",
        "2",
        "--points",
        "0.5;-0.5",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let e = stderr_json(&out);
    assert_eq!(e["error"]["kind"], "validation");
}

#[test]
fn cyclicity_runs_and_reports_residuals() {
    let out = run(&[
        "cyclicity",
        "--psi",
        "1;-0.5",
        "--a",
        "0.3",
        "--degrees",
        "0;5;10",
        "--truncation",
        "120",
        "--buffer",
        "40",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let residuals = v["payload"]["residuals"].as_array().unwrap();
    assert_eq!(residuals.len(), 3);
    let first = residuals[0]["residual"].as_f64().unwrap();
    let last = residuals[2]["residual"].as_f64().unwrap();
    assert!(last < first);
}

#[test]
fn acceptance_subcommand_reports_per_criterion_lines() {
    let out = run(&["acceptance", "--only", "1;6"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let criteria = v["payload"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 2);
    assert_eq!(criteria[0]["id"], 1);
    assert_eq!(criteria[1]["id"], 6);
    assert!(v["payload"]["all_passed"].as_bool().unwrap());
}
