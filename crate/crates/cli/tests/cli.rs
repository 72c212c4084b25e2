use std::process::{Command, Output};

use serde_json::Value;

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .output()
        .expect("spawn verify")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../../../docs/report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).expect("schema compiles")
}

fn assert_valid(v: &Value) {
    let validator = schema();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn without_timestamp(out: &Output) -> Vec<u8> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    text.lines()
        .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
        .collect::<Vec<_>>()
        .join("\n")
        .into_bytes()
}

#[test]
fn invariants_over_rationals_exit_zero() {
    let out = verify(&["genus4-odd-invariants", "--rational"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_valid(&r);
    assert_eq!(r["config"]["prime"], "rational");
    let trials = r["pipelines"][0]["trials"].as_array().unwrap();
    assert_eq!(trials.len(), 1);
    assert_eq!(trials[0]["status"], "passed");
    assert!(trials[0]["seed"].is_null());

    let mut broken = r.clone();
    broken["pipelines"][0]["trials"][0]["status"] = "maybe".into();
    assert!(!schema().is_valid(&broken));
}

#[test]
fn forward_twenty_seeds() {
    let out = verify(&[
        "genus4-spin3",
        "--prime",
        "10007",
        "--seed",
        "1",
        "--trials",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_valid(&r);
    let trials = r["pipelines"][0]["trials"].as_array().unwrap();
    let seeds: Vec<u64> = trials.iter().map(|t| t["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, (1..=20).collect::<Vec<_>>());
    assert_eq!(r["summary"]["failed"], 0);
}

#[test]
fn all_runs_four_pipelines() {
    let out = verify(&["all", "--prime", "10007", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_valid(&r);
    let names: Vec<&str> = r["pipelines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "genus4-spin3",
            "genus4-odd",
            "genus3-spin4-odd",
            "genus3-spin4-even"
        ]
    );
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["all", "--seed", "3", "--trials", "2"];
    let a = verify(&args);
    let b = verify(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_timestamp(&a), without_timestamp(&b));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["genus4-spin3", "--prime", "9"][..],
        &["genus4-spin3", "--prime", "3"],
        &["genus4-spin3", "--rational"],
        &["all", "--rational"],
        &["genus4-spin3", "--trials", "0"],
        &["genus4-spin3", "--prime", "7", "--rational"],
        &["genus4-spin3", "--json", "--human"],
        &["genus4-spin3", "--exhaust-tolerance", "1.5"],
        &["no-such-pipeline"],
    ] {
        assert_eq!(verify(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn exhaustion_respects_tolerance() {
    let strict = verify(&["genus3-spin4-even", "--resample-cap", "0", "--trials", "2"]);
    assert_eq!(strict.status.code(), Some(1));
    let r = report(&strict);
    assert_valid(&r);
    assert_eq!(r["summary"]["exhausted"], 2);
    assert_eq!(r["summary"]["failed"], 0);

    let lenient = verify(&[
        "genus3-spin4-even",
        "--resample-cap",
        "0",
        "--trials",
        "2",
        "--exhaust-tolerance",
        "1",
    ]);
    assert_eq!(lenient.status.code(), Some(0));
}

#[test]
fn human_output_and_out_file() {
    let dir = std::env::temp_dir().join(format!("verify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = verify(&[
        "genus4-odd-sample",
        "--seed",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_valid(&written);

    let human = verify(&["genus4-odd-sample", "--seed", "2", "--human"]);
    let text = String::from_utf8(human.stdout).unwrap();
    assert!(
        text.contains("summary: 1 passed, 0 failed, 0 exhausted, exit 0"),
        "{text}"
    );
    std::fs::remove_dir_all(&dir).ok();
}
