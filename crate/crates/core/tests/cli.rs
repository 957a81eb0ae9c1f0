//! End-to-end tests of the `torb` binary: exit codes, reports and golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(name)
}

fn torb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torb")).args(args).output().expect("run torb")
}

fn run_file(command: &str, path: &Path, json: bool) -> (i32, String, String) {
    let p = path.to_str().unwrap();
    let mut args = vec![command, p];
    if json {
        args.push("--json");
    }
    let out = torb(&args);
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn temp_doc(name: &str, body: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json_of(stdout: &str) -> Value {
    serde_json::from_str(stdout).expect("report is JSON")
}

#[test]
fn golden_all_reports() {
    for tuple in ["1112", "1231", "2111"] {
        let (code, stdout, _) = run_file("all", &data(&format!("square_{tuple}.json")), true);
        assert_eq!(code, 0);
        let expected = std::fs::read_to_string(golden(&format!("all_square_{tuple}.json"))).unwrap();
        assert_eq!(stdout, expected, "golden mismatch for {tuple}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = run_file("all", &data("square_1231.json"), true).1;
    let b = run_file("all", &data("square_1231.json"), true).1;
    assert_eq!(a, b);
    // re-ingesting the report as expected values reproduces it
    let report = json_of(&a);
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", a);
}

#[test]
fn form_on_square_family() {
    let (code, stdout, _) = run_file("form", &data("square_1112.json"), true);
    assert_eq!(code, 0);
    let v = json_of(&stdout);
    assert_eq!(v["results"]["form"]["normalized_diagonal"], serde_json::json!([1, -2]));
    assert_eq!(v["results"]["form"]["hyperbolic_basis"], Value::Null);
    let (_, stdout, _) = run_file("form", &data("square_1001.json"), true);
    let v = json_of(&stdout);
    assert!(v["results"]["form"]["hyperbolic_basis"].is_array());
    let (code, stdout, _) = run_file("form", &data("square_1112.json"), false);
    assert_eq!(code, 0);
    assert!(stdout.contains("normalized diagonal: (1, -2)"));
}

#[test]
fn model_reports_local_order() {
    let (code, stdout, _) = run_file("model", &data("square_1231.json"), true);
    assert_eq!(code, 0);
    let v = json_of(&stdout);
    let m = &v["results"]["model"];
    assert_eq!(m["almost_free"], true);
    assert_eq!(m["free"], false);
    assert_eq!(m["sphere_dims"], serde_json::json!([3, 3]));
    let p4 = m["vertices"].as_array().unwrap().iter().find(|x| x["vertex"] == "p4").unwrap();
    assert_eq!(p4["local_order"], 5);
    let (_, stdout, _) = run_file("model", &data("square_1001.json"), true);
    assert_eq!(json_of(&stdout)["results"]["model"]["manifold"], true);
}

#[test]
fn weights_and_betti_commands() {
    let (code, stdout, _) = run_file("weights", &data("square_1112.json"), true);
    assert_eq!(code, 0);
    let v = json_of(&stdout);
    let forms: Vec<&str> = v["results"]["weights"]["edges"].as_array().unwrap().iter().map(|e| e["form"].as_str().unwrap()).collect();
    assert_eq!(forms, vec!["y", "x", "x - y", "2*x - y"]);
    let (code, stdout, _) = run_file("betti", &data("triangle.json"), true);
    assert_eq!(code, 0);
    assert_eq!(json_of(&stdout)["results"]["betti"]["betti"], serde_json::json!([1, 1, 1]));
    let (code, stdout, _) = run_file("betti", &data("interval.json"), true);
    assert_eq!(code, 0);
    assert_eq!(json_of(&stdout)["results"]["betti"]["betti"], serde_json::json!([1, 1]));
    let (code, stdout, _) = run_file("generators", &data("sigma2.json"), true);
    assert_eq!(code, 0);
    assert_eq!(json_of(&stdout)["results"]["generators"]["degrees"], serde_json::json!([0, 4]));
}

#[test]
fn ring_command_lists_products() {
    let (code, stdout, _) = run_file("ring", &data("square_2111.json"), false);
    assert_eq!(code, 0);
    assert!(stdout.contains("h2_1 * h2_1 ="));
}

#[test]
fn pentagon_fails_clause_e() {
    let (code, stdout, stderr) = run_file("validate", &data("pentagon.json"), false);
    assert_eq!(code, 3);
    assert!(stderr.contains("clause (e)") && stderr.contains("at most four vertices"));
    assert!(stdout.contains("(e) FAIL"));
    let (code, stdout, _) = run_file("validate", &data("pentagon.json"), true);
    assert_eq!(code, 3);
    assert_eq!(json_of(&stdout)["error"]["exit_code"], 3);
}

#[test]
fn cube_quotient_fails_clause_f() {
    let (code, _, stderr) = run_file("validate", &data("cube_quotient3.json"), false);
    assert_eq!(code, 3);
    assert!(stderr.contains("clause (f)"));
}

#[test]
fn degenerate_labels_exit_4() {
    let (code, _, stderr) = run_file("weights", &data("square_degenerate.json"), false);
    assert_eq!(code, 4);
    assert!(stderr.contains("linearly independent whenever"));
}

#[test]
fn slice_model_command() {
    let (code, stdout, _) = run_file("slice-model", &data("slice_square_k3.json"), true);
    assert_eq!(code, 0);
    let s = &json_of(&stdout)["results"]["slice-model"];
    assert_eq!(s["kernel"], serde_json::json!([[-1, -1, 0, 1]]));
    assert_eq!((s["manifold_dim"].as_u64(), s["min_orbit_dim"].as_u64()), (Some(5), Some(1)));
    let (code, _, stderr) = run_file("slice-model", &data("slice_square_k3_divisor2.json"), false);
    assert_eq!(code, 4);
    assert!(stderr.contains("mapped isomorphically onto"));
}

#[test]
fn schema_errors_exit_2() {
    let bad_label = temp_doc(
        "bad_label.json",
        r#"{"torus_rank": 2, "product": [{"kind": "Delta", "n": 1}, {"kind": "Delta", "n": 1}],
            "labels": {"F1": [1, 0], "F2": [0, 1], "F3": [1, 1, 0], "F4": [1, 2]}}"#,
    );
    let (code, _, stderr) = run_file("betti", &bad_label, false);
    assert_eq!(code, 2);
    assert!(stderr.contains("labels.F3"));
    let broken = temp_doc("broken.json", "{\"torus_rank\": 2,\n  \"labels\": }");
    let (code, _, stderr) = run_file("validate", &broken, false);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 2"));
    let both = temp_doc(
        "both.json",
        r#"{"torus_rank": 1, "product": [{"kind": "Delta", "n": 1}], "facets": ["A"], "labels": {}}"#,
    );
    assert_eq!(run_file("validate", &both, false).0, 2);
    let missing = Path::new(env!("CARGO_TARGET_TMPDIR")).join("does_not_exist.json");
    assert_eq!(run_file("validate", &missing, false).0, 2);
    // form needs an orbit space of dimension two
    assert_eq!(run_file("form", &data("interval.json"), false).0, 2);
    // the GKM commands need k = n
    assert_eq!(run_file("betti", &data("slice_square_k3.json"), false).0, 2);
}

#[test]
fn shorthand_names_facets_in_order() {
    let doc = temp_doc(
        "delta2.json",
        r#"{"torus_rank": 2, "product": [{"kind": "Delta", "n": 2}],
            "labels": {"F1": [1, 0], "F2": [0, 1], "F3": ["-1", "-1"]}}"#,
    );
    let (code, stdout, _) = run_file("validate", &doc, true);
    assert_eq!(code, 0);
    let v = json_of(&stdout);
    assert_eq!(v["results"]["validate"]["decomposition"]["factors"][0]["facets"], serde_json::json!(["F1", "F2", "F3"]));
}

#[test]
fn flags_are_honoured() {
    let p = data("square_1112.json");
    let out = torb(&["betti", p.to_str().unwrap(), "--json", "--max-degree", "12", "--no-duality-check"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["betti"]["series"]["truncation_degree"], 12);
    assert_eq!(v["results"]["betti"]["duality"], Value::Null);
    assert_eq!(torb(&["bogus", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn all_on_every_shipped_document() {
    let expected = [
        ("square_1112.json", 0),
        ("square_1231.json", 0),
        ("square_2111.json", 0),
        ("square_1001.json", 0),
        ("square_b0_2031.json", 0),
        ("triangle.json", 0),
        ("sigma2.json", 0),
        ("interval.json", 0),
        ("slice_square_k3.json", 0),
        ("slice_square_k3_divisor2.json", 4),
        ("square_degenerate.json", 4),
        ("pentagon.json", 3),
        ("cube_quotient3.json", 3),
    ];
    for (name, code) in expected {
        assert_eq!(run_file("all", &data(name), false).0, code, "{name}");
    }
}
