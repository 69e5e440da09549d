use serde_json::Value;
use std::process::{Command, Output};

fn sobolev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sobolev")).args(args).output().expect("spawn sobolev")
}

fn csv(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn csv_output_is_reproducible() {
    let args = ["solve", "--geometry", "ball3", "--c", "0.5", "--K", "12", "--count", "6"];
    let a = sobolev(&args);
    let b = sobolev(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn error_column_matches_lambda_and_reference() {
    let out = sobolev(&["solve", "--geometry", "disk", "--method", "I", "--K", "10", "--count", "5"]);
    let rows = csv(&out);
    assert_eq!(rows[0], ["index", "lambda", "reference", "abs_error", "n", "k", "multiplicity", "dof"]);
    assert_eq!(rows.len(), 6);
    for r in &rows[1..] {
        let lam: f64 = r[1].parse().unwrap();
        let reference: f64 = r[2].parse().unwrap();
        let err: f64 = r[3].parse().unwrap();
        assert_eq!(err, (lam - reference).abs());
    }
}

#[test]
fn json_carries_rows_and_meta() {
    let out = sobolev(&["reference", "--geometry", "sector", "--gamma", "0.5", "--count", "3", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["meta"]["command"], "reference");
    assert!(v["rows"][0]["lambda"].as_f64().unwrap() > 0.0);
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("sobolev-cli-test-{}.csv", std::process::id()));
    let out = sobolev(&["reference", "--count", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("index,lambda"));
    assert!(text.contains("9.8696044010893580"));
}

#[test]
fn exit_codes() {
    let bad = [
        vec!["solve", "--K", "0"],
        vec!["solve", "--c", "-1"],
        vec!["solve", "--geometry", "square", "--method", "I"],
        vec!["solve", "--geometry", "torus"],
        vec!["convergence", "--geometry", "disk"],
        vec!["solve", "--geometry", "square", "--quad-degrees", "1,2,3"],
    ];
    for args in &bad {
        let out = sobolev(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("sobolev:"), "{args:?}");
    }
    assert_eq!(sobolev(&["validate", "--module", "orthopoly"]).status.code(), Some(0));
}

#[test]
fn validate_lists_every_module() {
    let rows = csv(&sobolev(&["validate"]));
    for m in ["orthopoly", "specfun", "eiglin", "ball", "sector", "mortar"] {
        assert!(rows.iter().any(|r| r[0] == m && r[2] == "true"), "{m}");
    }
    assert!(rows[1..].iter().all(|r| r[2] == "true"));
}
