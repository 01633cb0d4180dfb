use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn nakayama(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nakayama"))
        .args(args)
        .env_remove("NAKAYAMA_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = nakayama(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn multiplication_table_matches() {
    let out = nakayama(&["multable", "--n", "2", "--k", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS (0 mismatches)"));
}

#[test]
fn classify_counts() {
    let v = json_of(&["classify", "--n", "2", "--k", "1"]);
    assert_eq!(v["counts"], serde_json::json!({"2": 1, "3": 2, "4": 1}));
    assert_eq!(v["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn split_catalog_dimensions() {
    let v = json_of(&["catalog", "--n", "1", "--max-valleys", "0"]);
    let dims: Vec<(String, u64)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["label"].as_str().unwrap().to_string(), e["dim"].as_u64().unwrap()))
        .collect();
    let expect = [("P:1|1", 4), ("W:1|1:k=0", 1), ("S:1|1:k=0", 2), ("N:1|1:k=0", 2), ("M:1|1:k=0", 3)];
    assert_eq!(dims, expect.iter().map(|(l, d)| (l.to_string(), *d)).collect::<Vec<_>>());
}

#[test]
fn adjunction_examples() {
    for (n, k) in [("2", "1"), ("1", "2"), ("3", "0")] {
        let v = json_of(&["adjunction", "--n", n, "--k", k]);
        assert_eq!(v["ok"], true, "n={n} k={k}");
    }
}

#[test]
fn outputs_validate_against_schemas() {
    let runs: &[(&str, &[&str])] = &[
        ("algebra", &["--n", "3"]),
        ("catalog", &["--n", "2", "--max-valleys", "2"]),
        ("tensor", &["--n", "3", "S:1|2:k=1", "N:2|3:k=1"]),
        ("multable", &["--n", "1", "--k", "2"]),
        ("cells", &["--n", "2", "--max-valleys", "2"]),
        ("adjunction", &["--n", "2", "--k", "2"]),
        ("cellrep", &["--n", "2", "--k", "1", "--j", "2"]),
        ("localize", &["--n", "3", "--k", "1", "--contract", "1,3"]),
        ("classify", &["--n", "3", "--k", "1"]),
    ];
    for (cmd, args) in runs {
        let mut all = vec![*cmd];
        all.extend_from_slice(args);
        let value = json_of(&all);
        let compiled = jsonschema::JSONSchema::options()
            .with_draft(jsonschema::Draft::Draft202012)
            .compile(&schema(cmd))
            .unwrap();
        let msgs: Vec<String> = match compiled.validate(&value) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
        };
        assert!(msgs.is_empty(), "{cmd}: {msgs:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let a = nakayama(&["classify", "--n", "3", "--k", "1", "--json", "--seed", "7"]);
    let b = nakayama(&["classify", "--n", "3", "--k", "1", "--json", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let a = nakayama(&["cellrep", "--n", "2", "--k", "1", "--json"]);
    let b = nakayama(&["cellrep", "--n", "2", "--k", "1", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_nakayama"))
        .args(["classify", "--n", "1", "--k", "1", "--json"])
        .env("NAKAYAMA_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("classify.json")).unwrap()).unwrap();
    assert_eq!(written["counts"], serde_json::json!({"1": 1, "2": 1}));

    let file = dir.path().join("nested/cells.json");
    let out = nakayama(&["cells", "--n", "1", "--max-valleys", "1", "--output", file.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("J_split > J_M0 > J_1"));
    assert!(file.exists());
}

#[test]
fn exit_codes() {
    assert_eq!(nakayama(&["catalog", "--n", "0"]).status.code(), Some(2));
    assert_eq!(nakayama(&["cellrep", "--n", "5", "--k", "1"]).status.code(), Some(2));
    assert_eq!(nakayama(&["localize", "--n", "2", "--k", "1", "--contract", "3"]).status.code(), Some(2));
    assert_eq!(nakayama(&["tensor", "--n", "2", "Q:1|1", "W:1|1:k=1"]).status.code(), Some(2));
    assert_eq!(nakayama(&["classify", "--n", "2", "--k", "0"]).status.code(), Some(2));
    // a catalog too small to absorb the product leaves a residual
    let out = nakayama(&["tensor", "--n", "2", "N:1|2:k=1", "M:2|1:k=1", "--max-valleys", "0"]);
    assert_eq!(out.status.code(), Some(1));
}
