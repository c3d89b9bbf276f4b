//! End-to-end checks of the command-line interface: output formats
//! validate against the shipped JSON schemas, and exit codes follow the
//! documented contract.

use std::process::Command;

use jsonschema::validator_for;
use serde_json::Value;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_superline")
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(bin()).args(args).output().expect("spawn");
    (
        String::from_utf8_lossy(&out.stdout).to_string(),
        String::from_utf8_lossy(&out.stderr).to_string(),
        out.status.code().unwrap_or(-1),
    )
}

fn schema(name: &str) -> Value {
    let path = format!("{}/../../schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).expect("schema file")).unwrap()
}

fn assert_valid(schema_name: &str, doc: &Value) {
    let validator = validator_for(&schema(schema_name)).expect("valid schema");
    let errors: Vec<String> = validator
        .iter_errors(doc)
        .map(|e| format!("{e}"))
        .collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}");
}

#[test]
fn classify_json_matches_schema_and_examples() {
    let (out, _, code) = run(&["classify", "--lambda", "-1/2", "--nu", "-1/2", "--mu", "1"]);
    assert_eq!(code, 0);
    assert_eq!(
        out.trim(),
        r#"{"class":"super_resonant","k":"1","s":1,"t":1}"#
    );
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_valid("classify.schema.json", &doc);

    let (out, _, _) = run(&["classify", "--lambda", "1/3", "--nu", "0", "--mu", "4/3"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["class"], "weakly_resonant");
    assert_valid("classify.schema.json", &doc);

    let (out, _, _) = run(&["classify", "--lambda", "1/7", "--nu", "2/7", "--mu", "0"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["class"], "none");
    assert_valid("classify.schema.json", &doc);
}

#[test]
fn dim_and_basis_json_match_schema() {
    let (out, _, code) = run(&[
        "dim", "--classical", "--lambda", "0", "--nu", "0", "--mu", "1", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["dim"], 3);
    assert_valid("dim.schema.json", &doc);

    let (out, _, code) = run(&[
        "basis", "--classical", "--lambda", "1/3", "--nu", "0", "--mu", "4/3", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["dim"], 1);
    assert!(doc["basis"].as_array().is_some_and(|b| b.len() == 1));
    assert_valid("dim.schema.json", &doc);
}

#[test]
fn table_json_matches_schema() {
    let (out, _, code) = run(&[
        "table",
        "--classical",
        "--s-max",
        "1",
        "--t-max",
        "1",
        "--delta-range",
        "0..4",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_valid("table.schema.json", &doc);
    assert!(!doc.as_array().unwrap().is_empty());
}

#[test]
fn bracket_prints_superfunction_grammar() {
    let (out, _, code) = run(&["bracket", "x^2", "theta"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "-x*theta");
    let (out, _, _) = run(&["bracket", "theta", "theta"]);
    assert_eq!(out.trim(), "1/2");
}

#[test]
fn exit_codes() {
    // inapplicable family parameters -> 2
    let (_, err, code) = run(&[
        "verify", "--family", "a1", "--k", "1", "--lambda", "0", "--nu", "1/5",
    ]);
    assert_eq!(code, 2, "stderr: {err}");
    assert!(err.contains("gbinom"));

    // verify pass -> 0
    let (out, _, code) = run(&["verify", "--family", "c+d", "--k", "2", "--s", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS"));

    // parse failure -> 1
    let (_, _, code) = run(&["bracket", "x^^", "theta"]);
    assert_eq!(code, 1);
}

#[test]
fn relative_dim_is_zero() {
    let (out, _, code) = run(&[
        "dim", "--relative", "--lambda", "0", "--nu", "0", "--mu", "1/2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["dim"], 0);
}
