//! End-to-end checks of the experiment runner: determinism, exit codes, the
//! published report schema, and per-subcommand sanity.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qcw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcw"))
        .args(args)
        .env_remove("QCW_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = qcw(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn repo_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("qcw-cli-test-{name}"));
    std::fs::write(&path, content).expect("temp write");
    path
}

fn parity_circuit_json() -> PathBuf {
    write_temp(
        "parity.json",
        r#"{
  "n": 2,
  "nodes": [
    {"kind": "input", "args": [0]},
    {"kind": "input", "args": [1]},
    {"kind": "not", "args": [0]},
    {"kind": "not", "args": [1]},
    {"kind": "and", "args": [2, 1]},
    {"kind": "and", "args": [0, 3]},
    {"kind": "or", "args": [4, 5]}
  ],
  "output": 6
}"#,
    )
}

fn bell_gates_txt() -> PathBuf {
    write_temp("bell.txt", "qubits 2\nH 0\nCNOT 0 1\n")
}

#[test]
fn identical_seeds_give_byte_identical_json() {
    let circuit = parity_circuit_json();
    let circuit = circuit.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["deutsch", "--seed", "7"],
        vec!["simon", "--n", "5", "--trials", "3", "--seed", "2"],
        vec!["grover", "--n", "8", "--marked", "00101100", "--seed", "4"],
        vec!["sat", "--circuit", circuit, "--seed", "3"],
        vec!["eq", "--n", "64", "--eps", "0.01", "--trials", "4", "--seed", "5"],
        vec!["intersect", "--n", "16", "--eps", "0.05", "--trials", "3", "--seed", "6"],
        vec!["factor", "--N", "91", "--seed", "1"],
        vec!["or-and", "--n1", "2", "--n2", "2", "--seed", "8"],
    ];
    for args in cases {
        let a = stdout_of(&args);
        let b = stdout_of(&args);
        assert_eq!(a, b, "non-deterministic output for {args:?}");
    }
}

#[test]
fn different_seeds_change_randomized_runs() {
    let a = stdout_of(&["simon", "--n", "6", "--seed", "1"]);
    let b = stdout_of(&["simon", "--n", "6", "--seed", "2"]);
    assert_ne!(a, b);
}

#[test]
fn qcw_seed_env_is_the_default_and_flag_wins() {
    let by_flag = stdout_of(&["order", "--a", "2", "--N", "5", "--seed", "11"]);
    let by_env = {
        let out = Command::new(env!("CARGO_BIN_EXE_qcw"))
            .args(["order", "--a", "2", "--N", "5"])
            .env("QCW_SEED", "11")
            .output()
            .expect("binary runs");
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(by_flag, by_env);
    let flag_beats_env = {
        let out = Command::new(env!("CARGO_BIN_EXE_qcw"))
            .args(["order", "--a", "2", "--N", "5", "--seed", "11"])
            .env("QCW_SEED", "99")
            .output()
            .expect("binary runs");
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(by_flag, flag_beats_env);
}

#[test]
fn exit_codes_distinguish_config_and_file_errors() {
    // Missing required flag: config error.
    assert_eq!(qcw(&["sat"]).status.code(), Some(2));
    // Bad epsilon: config error.
    assert_eq!(
        qcw(&["simon", "--n", "4", "--eps", "0.9"]).status.code(),
        Some(2)
    );
    // Unknown subcommand: clap reports usage errors as 2.
    assert_eq!(qcw(&["nonsense"]).status.code(), Some(2));
    // Nonexistent file: file error.
    assert_eq!(
        qcw(&["sat", "--circuit", "/nonexistent/x.json"]).status.code(),
        Some(3)
    );
    // Malformed file content: file error.
    let bad = write_temp("bad.json", "{not json");
    assert_eq!(
        qcw(&["sat", "--circuit", bad.to_str().unwrap()]).status.code(),
        Some(3)
    );
    // A correct "unsatisfiable" is still success.
    let unsat = write_temp(
        "unsat.json",
        r#"{"n":1,"nodes":[{"kind":"input","args":[0]},{"kind":"not","args":[0]},{"kind":"and","args":[0,1]}],"output":2}"#,
    );
    let out = qcw(&["sat", "--circuit", unsat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"satisfiable\":false"));
}

#[test]
fn every_report_line_validates_against_the_published_schema() {
    let schema_text =
        std::fs::read_to_string(repo_file("schemas/run_report.schema.json")).expect("schema file");
    let schema_json: serde_json::Value = serde_json::from_str(&schema_text).expect("schema json");
    let schema = jsonschema::JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft7)
        .compile(&schema_json)
        .expect("schema compiles");

    let circuit = parity_circuit_json();
    let bell = bell_gates_txt();
    let cases: Vec<Vec<&str>> = vec![
        vec!["deutsch"],
        vec!["simon", "--n", "4"],
        vec!["grover", "--n", "6", "--marked", "000111"],
        vec!["sat", "--circuit", circuit.to_str().unwrap()],
        vec!["or-and", "--n1", "2", "--n2", "2"],
        vec!["parity", "--n", "5"],
        vec!["order", "--a", "2", "--N", "5"],
        vec!["factor", "--N", "15"],
        vec!["eq", "--n", "16", "--trials", "2"],
        vec!["intersect", "--n", "8", "--trials", "2"],
        vec!["ip-check", "--n", "4"],
        vec!["simulate", "--circuit", bell.to_str().unwrap(), "--input", "00"],
        // wall_time present must still validate
        vec!["parity", "--n", "4", "--timings"],
    ];
    for args in cases {
        let text = stdout_of(&args);
        for line in text.lines() {
            let value: serde_json::Value = serde_json::from_str(line).expect("json line");
            if value.get("aggregate").is_some() {
                continue;
            }
            assert!(
                schema.is_valid(&value),
                "schema violation for {args:?}: {line}"
            );
        }
    }
}

#[test]
fn timings_flag_controls_wall_time_field() {
    let without = stdout_of(&["parity", "--n", "4", "--seed", "1"]);
    assert!(!without.contains("wall_time"));
    let with = stdout_of(&["parity", "--n", "4", "--seed", "1", "--timings"]);
    assert!(with.contains("wall_time"));
}

#[test]
fn csv_and_table_formats_render() {
    let csv = stdout_of(&["deutsch", "--format", "csv"]);
    assert!(csv.starts_with("algorithm,trial,n,seed,queries"));
    assert_eq!(csv.lines().count(), 1 + 4 + 1);
    let table = stdout_of(&["deutsch", "--format", "table"]);
    assert!(table.contains("algorithm"));
    assert!(table.contains("summary:"));
    assert_eq!(qcw(&["deutsch", "--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn grover_width_mismatches_are_config_errors() {
    assert_eq!(
        qcw(&["grover", "--n", "4", "--marked", "000111"]).status.code(),
        Some(2)
    );
    let table: String = (0..8).map(|x| format!("{x:03b} -> 0\n")).collect();
    let path = write_temp("narrow-oracle.txt", &table);
    assert_eq!(
        qcw(&["grover", "--n", "4", "--oracle", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    // Both sources at once is also a config error.
    assert_eq!(
        qcw(&["grover", "--marked", "01", "--oracle", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn grover_accepts_oracle_files() {
    let table: String = (0..16)
        .map(|x| format!("{x:04b} -> {}\n", u8::from(x == 11)))
        .collect();
    let path = write_temp("oracle.txt", &table);
    let out = stdout_of(&["grover", "--oracle", path.to_str().unwrap(), "--seed", "2"]);
    assert!(out.contains("\"witness\":\"1011\""));
    assert!(out.contains("\"success\":true"));
}

#[test]
fn simulate_reports_measurement_and_probability() {
    let bell = bell_gates_txt();
    let out = stdout_of(&[
        "simulate",
        "--circuit",
        bell.to_str().unwrap(),
        "--input",
        "00",
        "--seed",
        "9",
    ]);
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    let outcome = first["outcome"]["outcome"].as_str().unwrap();
    assert!(outcome == "00" || outcome == "11");
    let p = first["outcome"]["probability"].as_f64().unwrap();
    assert!((p - 0.5).abs() < 1e-9);
}

#[test]
fn intersect_reports_conserved_qubit_totals() {
    let text = stdout_of(&["intersect", "--n", "16", "--trials", "5", "--seed", "3"]);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        if v.get("aggregate").is_some() {
            continue;
        }
        let queries = v["queries"].as_u64().unwrap();
        let qubits = v["communication"]["qubits_total"].as_u64().unwrap();
        assert_eq!(qubits, queries * 2 * (4 + 3));
    }
}
