use std::process::{Command, Output};

use serde_json::Value;

fn obstrukt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obstrukt"))
        .args(args)
        .env_remove("OBSTRUKT_BUDGET")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn ok(args: &[&str]) -> Value {
    let out = obstrukt(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    if out.stdout.is_empty() {
        return Value::Null;
    }
    json_of(&out)
}

#[test]
fn a5_h2_has_order_two() {
    let v = ok(&["cohomology", "--group", "A5", "--coeff", "Z2", "--degree", "2"]);
    assert_eq!(v["order"], 2);
    assert_eq!(v["seed"], 20_240_611);
}

#[test]
fn cohomology_of_table_group_with_action() {
    // Z2 acting on Z2xZ2 by swapping the factors: H^1 = 0.
    let v = ok(&[
        "cohomology",
        "--group",
        r#"{"table": [[0, 1], [1, 0]]}"#,
        "--coeff",
        "Z2xZ2",
        "--action",
        r#"{"1": [[0, 1], [1, 0]]}"#,
        "--degree",
        "1",
    ]);
    assert_eq!(v["order"], 1);
}

#[test]
fn malformed_group_json_exits_one() {
    let out = obstrukt(&["cohomology", "--group", r#"{"table": [[0, 1],"#, "--degree", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("malformed JSON") && err.contains("line 1"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_table_and_shorthand_exit_one() {
    let out = obstrukt(&["cohomology", "--group", r#"{"table": [[0, 1], [0, 1]]}"#, "--degree", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = obstrukt(&["cohomology", "--group", "Q9", "--degree", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = obstrukt(&["cohomology", "--group", "A5", "--degree", "1", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cup_square_on_z2_is_nonzero() {
    let x = r#"{"degree": 1, "class": [1]}"#;
    let v = ok(&["cup", "--group", "Z2", "--left", x, "--right", x]);
    assert_eq!(v["cup"]["is_zero"], false);
    let v = ok(&["cup", "--group", "Z4", "--left", x, "--right", x]);
    assert_eq!(v["cup"]["is_zero"], true);
}

#[test]
fn massey_statuses() {
    let v = ok(&["massey", "--group", "Z2xZ2", "--characters", "[[0,0,1,1],[0,1,0,1]]"]);
    assert_eq!(v["status"], "excludes_zero");
    assert!(v.get("witness").is_none());
    let v = ok(&["massey", "--group", "Z4", "--characters", "1", "--n", "3"]);
    assert_eq!(v["status"], "contains_zero");
    assert_eq!(v["witness"]["defining_system"].as_array().unwrap().len(), 5);
    let v = ok(&["massey", "--group", "Z2", "--characters", "1", "--n", "3"]);
    assert_eq!(v["status"], "excludes_zero");
}

#[test]
fn exhausted_budget_exits_one() {
    let out = obstrukt(&["dwyer", "--base", "D4", "--characters", "1,2,1", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 nodes"));
}

#[test]
fn solve_obstructed_problem() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("emb.json");
    ok(&["emit-corpus", "embedding", "--size", "1", "-o", corpus.to_str().unwrap()]);
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&corpus).unwrap()).unwrap();
    assert!(c["instances"][0]["name"].as_str().unwrap().starts_with("Z4 over Z2"));
    let problem = dir.path().join("problem.json");
    std::fs::write(&problem, c["instances"][0]["problem"].to_string()).unwrap();
    let v = ok(&["solve", "--problem", problem.to_str().unwrap()]);
    assert_eq!(v["solvable"], false);
    assert_eq!(v["obstruction"]["is_zero"], false);
    assert_eq!(v["consistent"], true);
}

#[test]
fn verify_default_corpus_with_pinned_sign() {
    let v = ok(&["verify-cor65", "--corpus", "default"]);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["sign_convention"]["sign"], -1);
    assert_eq!(v["sign_convention"]["holds_with_minus"], true);
    assert!(v["instances"].as_array().unwrap().len() >= 20);
}

#[test]
fn wrong_sign_is_a_disagreement() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ext.json");
    let all = ok(&["emit-corpus", "extensions"]);
    let decisive: Vec<&Value> = all["instances"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|i| i["name"] == "Z3 by Z3xZ3 split, A = Z3")
        .collect();
    assert_eq!(decisive.len(), 1);
    std::fs::write(&path, serde_json::to_string(&decisive).unwrap()).unwrap();
    let out = obstrukt(&["verify-cor65", "--corpus", path.to_str().unwrap(), "--sign", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["all_passed"], false);
    let out = obstrukt(&["verify-cor65", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn emitted_corpora_are_deterministic_and_contain_named_instances() {
    let a = obstrukt(&["emit-corpus", "extensions"]);
    let b = obstrukt(&["emit-corpus", "extensions"]);
    assert_eq!(a.stdout, b.stdout);
    let ext = json_of(&a);
    assert_eq!(ext["instances"][0]["name"], "Z2 by Z2 split, A = Z2");

    let dw = ok(&["emit-corpus", "dwyer"]);
    let names: Vec<&str> = dw["instances"].as_array().unwrap().iter().map(|i| i["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"Z2xZ2: (0011, 0101)"));

    let other_seed = obstrukt(&["emit-corpus", "extensions", "--seed", "7"]);
    assert_eq!(json_of(&other_seed)["seed"], 7);
}

#[test]
fn dwyer_corpus_roundtrip_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dwyer.json");
    ok(&["emit-corpus", "dwyer", "--size", "40", "--output", path.to_str().unwrap()]);
    let v = ok(&["dwyer", "--corpus", path.to_str().unwrap()]);
    assert_eq!(v["cases"], 40);
    assert_eq!(v["all_agree"], true);
}

#[test]
fn icosahedral_example_report() {
    let v = ok(&["icosahedral-example"]);
    assert_eq!(v["pulled_back_order"], 4);
    assert_eq!(v["pulled_back_cyclic"], true);
    assert_eq!(v["witness_is_extension_class"], true);
    assert_eq!(v["matches_expected"], true);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["massey", "--group", "Z8", "--characters", "1", "--n", "3"];
    assert_eq!(obstrukt(&args).stdout, obstrukt(&args).stdout);
}
