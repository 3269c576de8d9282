use std::process::{Command, Output};

use serde_json::Value;

use prodvec::numeric::GaussianRational as G;
use prodvec::subspace::SubspacePair;

fn prodvec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodvec")).args(args).env_remove("PRODVEC_SEED").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch_file(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("prodvec-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn hakye_count() {
    let out = prodvec(&["count", "--fixture", "hakye-2x4", "--a", "3", "--b", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["resultant_degree"], 10);
    assert_eq!(v["verdict"], "InU");
    assert_eq!(v["k2l2_bound"], 10);
    assert_eq!(v["count"], 10);
}

#[test]
fn infinite_regime_exits_2() {
    let out = prodvec(&["count", "--seed", "3", "--n", "4", "--k", "1", "--l", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infinitely many product vectors"));
    let out = prodvec(&["classify", "--seed", "3", "--n", "4", "--k", "1", "--l", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["regime"], "InfiniteRegime");
}

#[test]
fn parse_errors_exit_4() {
    assert_eq!(prodvec(&["count", "--domain", "fuzzy"]).status.code(), Some(4));
    assert_eq!(prodvec(&["count", "--fixture", "hakye-2x4", "--a", "1", "--b", "1"]).status.code(), Some(4));
    let bad = scratch_file("bad.json", "{\"m\": 2, \"n\": 2, \"D_perp\": [[1, 2, 3]]}");
    assert_eq!(prodvec(&["count", "--input", bad.to_str().unwrap()]).status.code(), Some(4));
    let garbage = scratch_file("garbage.json", "not json");
    assert_eq!(prodvec(&["classify", "--input", garbage.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn random_needs_a_seed_and_reads_the_environment() {
    assert_eq!(prodvec(&["random", "--n", "3", "--k", "1"]).status.code(), Some(4));
    let from_env =
        Command::new(env!("CARGO_BIN_EXE_prodvec")).args(["random", "--n", "3", "--k", "1"]).env("PRODVEC_SEED", "42").output().unwrap();
    let from_flag = prodvec(&["random", "--n", "3", "--k", "1", "--seed", "42"]);
    assert_eq!(from_env.status.code(), Some(0));
    assert_eq!(from_env.stdout, from_flag.stdout);
}

#[test]
fn emitted_pairs_round_trip_through_input() {
    let out = prodvec(&["random", "--n", "3", "--k", "1", "--l", "2", "--seed", "42"]);
    let emitted = json(&out);
    let pair = SubspacePair::<G>::from_json(&emitted).unwrap();
    assert_eq!(pair.to_json(), emitted);
    let path = scratch_file("pair.json", std::str::from_utf8(&out.stdout).unwrap());
    let via_file = prodvec(&["count", "--input", path.to_str().unwrap()]);
    let via_seed = prodvec(&["count", "--n", "3", "--k", "1", "--l", "2", "--seed", "42"]);
    assert_eq!(via_file.status.code(), Some(0));
    assert_eq!(via_file.stdout, via_seed.stdout);
}

#[test]
fn spanning_set_input() {
    // D = span{e1 ⊗ f1, e2 ⊗ f2}, E unconstrained: only e1⊗f1 and e2⊗f2
    let path = scratch_file("span.json", r#"{"m": 2, "n": 2, "D_span": [[[1, 0], [0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0], ["1", "0"]]]}"#);
    let out = prodvec(&["count", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["count"], 2);
}

#[test]
fn fixtures_print_exact_vectors() {
    let v = json(&prodvec(&["fixture", "--fixture", "example-4-6"]));
    assert_eq!(v["D_perp"][0][5], serde_json::json!(["1", "1"]));
    assert_eq!(v["E_perp"][1][7], serde_json::json!(["-33", "9"]));
    let v = json(&prodvec(&["fixture", "--fixture", "diagonal", "--k", "1", "--l", "1", "--n", "2"]));
    assert_eq!(v["E_perp"][0], serde_json::json!([["0", "0"], ["1", "0"], ["0", "0"], ["-2", "0"]]));
}

#[test]
fn float_domain_agrees() {
    let exact = json(&prodvec(&["count", "--fixture", "hakye-2x4"]));
    let float = json(&prodvec(&["count", "--fixture", "hakye-2x4", "--domain", "float"]));
    assert_eq!(exact["count"], float["count"]);
    assert_eq!(exact["verdict"], float["verdict"]);
}

#[test]
fn resultant_subcommand() {
    let v = json(&prodvec(&["resultant", "--fixture", "hakye-2x4", "--a", "3", "--b", "1"]));
    assert_eq!(v["R_degree"], 10);
    assert_eq!(v["P"]["dz"], 3);
    assert_eq!(v["P"]["dw"], 1);
    assert_eq!(v["Q"]["dz"], 1);
    let c: Vec<String> = v["R"]["c"].as_array().unwrap().iter().map(|x| x[0].as_str().unwrap().to_string()).collect();
    assert_eq!(c, ["0", "1", "0", "0", "-24", "0", "0", "3", "0", "0", "1"]);
}

#[test]
fn batch_classification_is_deterministic() {
    let args = ["random", "--n", "3", "--k", "1", "--seed", "5", "--trials", "8"];
    let a = prodvec(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, prodvec(&args).stdout);
    assert_eq!(json(&a)["trials"].as_array().unwrap().len(), 8);
}

#[test]
fn text_output() {
    let out = prodvec(&["classify", "--fixture", "example-4-6", "--output", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: NotInU"), "{text}");
    assert!(text.contains("reason: ResultantIdenticallyZero"));
}
