use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cardinal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cardinal")).args(args).output().expect("run cardinal")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn invalid_degree_is_a_configuration_error() {
    let out = cardinal(&["table31", "--degrees", "0", "--sizes", "64"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn too_small_order_is_a_configuration_error() {
    let out = cardinal(&["table51", "--degrees", "9", "--sizes", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn low_precision_is_a_configuration_error() {
    let out = cardinal(&["lambda-inf", "--precision", "32"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_as_json() {
    let out = cardinal(&["table31", "--degrees", "2,3", "--sizes", "32", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "table31");
    assert_eq!(doc["config"]["degrees"], serde_json::json!([2, 3]));
    let rows = doc["rows"].as_array().unwrap();
    let kappa: Vec<&Value> = rows.iter().filter(|r| r["kind"] == "kappa_T").collect();
    assert_eq!(kappa.len(), 2);
    let gb: Vec<&str> =
        rows.iter().filter(|r| r["kind"] == "gershgorin_bound").map(|r| r["exact"].as_str().unwrap()).collect();
    assert_eq!(gb, ["2", "3"]);
    for col in doc["columns"].as_array().unwrap() {
        assert!(rows[0].get(col.as_str().unwrap()).is_some());
    }
}

#[test]
fn limiting_values_as_text() {
    let out = cardinal(&["lambda-inf", "--degrees", "1..5", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().contains("inv_lambda_inf"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 6);
    assert!(text.contains("15/2"));
}

#[test]
fn config_file_and_output_file() {
    let config = scratch("embed.toml");
    let target = scratch("embed.csv");
    std::fs::write(&config, format!("degrees = [3]\nsizes = [40]\nout = {:?}\n", target.to_str().unwrap())).unwrap();
    let out = cardinal(&["embed-plan", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&target).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("d,n,kind"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn flags_override_config_file() {
    let config = scratch("override.toml");
    std::fs::write(&config, "degrees = [3]\nsizes = [40]\nformat = \"json\"\n").unwrap();
    let out = cardinal(&["embed-plan", "--config", config.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("d,n,kind"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let config = scratch("bad.toml");
    std::fs::write(&config, "degreez = [3]\n").unwrap();
    let out = cardinal(&["lambda-inf", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["figure52", "--degrees", "5", "--sizes", "16..64:16"];
    let one = cardinal(&[&args[..], &["--jobs", "1"]].concat());
    let many = cardinal(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn small_scan_agrees_with_prediction() {
    let out = cardinal(&["scan", "--degrees", "7", "--sizes", "23,24"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains(",9;10,"), "{text}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("2 cells, 2 agree"));
}

#[test]
fn oracle_cross_check_passes() {
    let out = cardinal(&["table51", "--degrees", "5", "--sizes", "40", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("pass"));
}
