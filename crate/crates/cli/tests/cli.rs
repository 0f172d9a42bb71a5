use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn pencils(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pencils"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn with_input(cmd: &str, file: &str) -> Output {
    let path = data(file);
    pencils(&[cmd, "--input", path.to_str().unwrap()])
}

#[test]
fn classify_w_node() {
    let out = with_input("classify", "w_node.json");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["tag"], "NodalStratum");
    assert_eq!(v["result"]["root_type"], "2+1+1");
    assert!(v["statement"].is_string());
}

#[test]
fn normal_forms_of_w_node() {
    let out = with_input("nodal-canon", "w_node.json");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["path"], "Exact");
    let v = json(&with_input("verify-node", "w_node.json"));
    assert_eq!(v["result"]["unique"], true);
    assert_eq!(v["result"]["singular_points"][0]["point"], serde_json::json!(["0/1", "0/1", "0/1", "1/1"]));
}

#[test]
fn diagonal_pencil_round_trip() {
    let v = json(&with_input("diagonalize", "diagonal.json"));
    assert_eq!(v["result"]["lambdas"], serde_json::json!(["0/1", "1/1", "2/1", "3/1"]));
    let v = json(&with_input("stabilizer", "diagonal.json"));
    assert_eq!(v["result"]["lie_algebra_dim"], 0);
}

#[test]
fn schubert_pairing() {
    let out = pencils(&["schubert", "--pairing", "sigma1:8,7", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["degree"], 1);
}

#[test]
fn jmap_and_legendre_agree() {
    let v = json(&pencils(&["jmap", "--coeffs", "1,6,11,6,0"]));
    assert_eq!(v["result"]["j"], "35152/9");
    assert_eq!(v["result"]["lambda"], "-3/1");
    let w = json(&pencils(&["legendre", "--lambda", "-3"]));
    assert_eq!(w["result"]["j"], "35152/9");
}

#[test]
fn fiber_structure_and_ramification() {
    let v = json(&pencils(&["fiber-structure", "--a", "0"]));
    assert_eq!(v["result"]["multiplicity"], 3);
    let v = json(&pencils(&["ramification"]));
    assert_eq!(v["result"].as_array().unwrap().len(), 5);
}

#[test]
fn slice_verify_is_deterministic() {
    let args = ["slice-verify", "--trials", "3", "--seed", "7", "--values", "5,-3"];
    let a = pencils(&args);
    let b = pencils(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["result"]["all_passed"], true);
    for t in v["result"]["trials"].as_array().unwrap() {
        assert_eq!(t["tangent_count_with_multiplicity"], 12);
        assert_eq!(t["j_fiber_counts"]["-3/1"], 12);
    }
}

#[test]
fn report_single_trial() {
    let out = pencils(&["report", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &json(&out)["result"]["classes"];
    assert_eq!(c["F_a"]["class"], "12σ1");
    assert_eq!(c["O_1728"]["class"], "6σ1");
    assert_eq!(c["O_0"]["class"], "4σ1");
    assert_eq!(c["T"]["class"], "12σ1");
}

#[test]
fn degenerate_slice_is_rejected() {
    let out = with_input("report", "diagonal_slice.json");
    assert_eq!(out.status.code(), Some(2));
    let msg = json(&out)["error"]["message"].as_str().unwrap().to_string();
    assert!(msg.contains("seed 99"), "{msg}");
}

#[test]
fn schema_errors_name_the_path() {
    let out = with_input("classify", "bad_entry.json");
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "schema");
    assert_eq!(v["error"]["path"], "Q0[3][3]");

    let out = with_input("classify", "extra_key.json");
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("Q2"));
}

#[test]
fn preconditions_exit_2() {
    assert_eq!(with_input("diagonalize", "w_node.json").status.code(), Some(2));
    assert_eq!(with_input("nodal-form", "diagonal.json").status.code(), Some(2));
    assert_eq!(pencils(&["classify"]).status.code(), Some(2));
    let path = data("w_node.json");
    let low = pencils(&["classify", "--input", path.to_str().unwrap(), "--precision-bits", "32"]);
    assert_eq!(low.status.code(), Some(2));
    // unknown commands and flags are rejected by the parser
    assert_eq!(pencils(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pencils(&["ramification", "--bogus", "1"]).status.code(), Some(2));
}

#[test]
fn keys_are_sorted() {
    let out = pencils(&["fiber-structure", "--a", "1728"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("    \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
