use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittsym")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn laurent_one(p: u64, n: usize) -> String {
    let mut coords = vec![json!({ "0": [1] })];
    coords.resize(n, json!({}));
    json!({ "p": p, "n": n, "ring": { "kind": "laurent-poly", "p": p }, "coords": coords }).to_string()
}

#[test]
fn witt_add_carries() {
    let a = r#"{"p":2,"n":2,"ring":{"kind":"prime-field","p":2},"coords":[1,0]}"#;
    let o = run(&["witt", "add", "--a", a, "--b", a, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["coords"], json!([{}, { "0": [1] }]));
}

#[test]
fn anchor_fixture() {
    for (p, n) in [(2u64, 3usize), (3, 2)] {
        let a = laurent_one(p, n);
        let o = run(&["symbol", "asw", "--p", &p.to_string(), "--a", &a, "--b", r#"{"1":[1]}"#, "--json"]);
        assert_eq!(o.status.code(), Some(0));
        let v = stdout_json(&o);
        assert_eq!(v["value"], json!(1));
        assert_eq!(v["modulus"], json!(p.pow(n as u32)));
        assert_eq!(v["provenance"]["command"], json!("symbol asw"));
    }
}

#[test]
fn malformed_json_is_a_usage_error() {
    let o = run(&["symbol", "asw", "--a", "{\"p\": 2,", "--b", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1 column"));
}

#[test]
fn missing_arguments_are_usage_errors() {
    assert_eq!(run(&["witt", "add", "--a", "{}"]).status.code(), Some(2));
}

#[test]
fn zero_b_is_rejected() {
    let o = run(&["symbol", "asw", "--a", &laurent_one(2, 1), "--b", "{}"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_suite_exits_2() {
    assert_eq!(run(&["suite", "run", "--name", "nonexistent"]).status.code(), Some(2));
}

#[test]
fn over_budget_exits_2() {
    let o = run(&["suite", "run", "--name", "prop-3.7-adjoint", "--p", "5", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn adjoint_suite_passes() {
    let args = ["suite", "run", "--name", "prop-3.7-adjoint", "--p", "2", "--f", "1", "--n", "2", "--samples", "100", "--seed", "7", "--json"];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let mut v = stdout_json(&o);
    assert_eq!(v["failures"], json!([]));
    assert_eq!(v["samples_run"], json!(100));

    let mut again = stdout_json(&run(&args));
    v["wall_time_ms"] = json!(0);
    again["wall_time_ms"] = json!(0);
    assert_eq!(v.to_string(), again.to_string());
}

#[test]
fn anchor_suite_reports_one_mod_nine() {
    let o = run(&["suite", "run", "--name", "anchor-normalization", "--p", "3", "--n", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["observed"], json!({ "value": 1, "modulus": 9 }));
}

#[test]
fn suite_list_names_statements() {
    let o = run(&["suite", "list", "--json"]);
    let v = stdout_json(&o);
    let suites = v["suites"].as_array().unwrap();
    assert!(suites.iter().any(|s| s["id"] == "prop-3.7-adjoint"));
    assert!(suites.iter().all(|s| !s["description"].as_str().unwrap().is_empty()));
}

#[test]
fn forms_eval_of_the_anchor_tensor() {
    let ring = json!({ "kind": "laurent-poly", "p": 2 });
    let wv = |c: Value| json!({ "p": 2, "n": 2, "ring": ring, "coords": [c, {}] });
    let tensor = json!({
        "n": 2,
        "ring": ring,
        "terms": [{ "c": 1, "left": wv(json!({ "-1": [1] })), "right": wv(json!({ "1": [1] })) }],
    });
    let o = run(&["forms", "eval", "--p", "2", "--tensor", &tensor.to_string(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["value"], json!(1));
    assert_eq!(stdout_json(&o)["modulus"], json!(4));
}

#[test]
fn forms_check_relations() {
    for rel in ["M_n", "N_n", "N_cov"] {
        let o = run(&["forms", "check", "--relation", rel, "--p", "3", "--n", "2", "--samples", "10"]);
        assert_eq!(o.status.code(), Some(0), "{rel}");
    }
    assert_eq!(run(&["forms", "check", "--relation", "Q_n"]).status.code(), Some(2));
}

#[test]
fn pairing_commands() {
    let inv = r#"{"p":2,"n":2,"ring":{"kind":"laurent-poly","p":2},"coords":[{"-1":[1]},{}]}"#;
    let t = r#"{"p":2,"n":2,"ring":{"kind":"laurent-poly","p":2},"coords":[{"1":[1]},{}]}"#;
    let o = run(&["pairing", "n", "--p", "2", "--a", inv, "--b", t, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["value"], json!(1));
    let o = run(&["pairing", "mn", "--p", "2", "--a", t, "--b", inv, "--json"]);
    assert_eq!(stdout_json(&o)["value"], json!(3));
    let x = r#"{"p":2,"ring":{"kind":"laurent-poly","p":2},"window":[{"0":[1]}],"top_index":0}"#;
    let o = run(&["pairing", "inf", "--p", "2", "--x", x, "--y", x, "--json"]);
    assert_eq!(stdout_json(&o)["value"], json!(0));
}

#[test]
fn json_from_a_file() {
    let dir = std::env::temp_dir().join(format!("wittsym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.json");
    std::fs::write(&path, laurent_one(3, 1)).unwrap();
    let arg = format!("@{}", path.display());
    let o = run(&["symbol", "asw", "--p", "3", "--a", &arg, "--b", r#"{"1":[1]}"#, "--json"]);
    assert_eq!(stdout_json(&o)["value"], json!(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
