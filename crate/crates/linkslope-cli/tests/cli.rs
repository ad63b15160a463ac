use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../linkslope/corpus").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkslope")).args(args).env_remove("LINKSLOPE_TOL").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn tmp(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("linkslope-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn whitehead_slope_at_minus_one() {
    let out = run(&["slope", "--pd", &corpus("whitehead.pd"), "--distinguished", "0", "--character", "root:1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["slope"]["finite"], serde_json::json!([4.0, 0.0]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["admissible"], true);
}

#[test]
fn output_is_byte_stable() {
    let args = ["slope", "--pd", &corpus("L11n396.pd"), "--distinguished", "1", "--colors", "1,0,2", "--symbolic"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["symbolic"], "-t1*t2 + 2 - t1^-1*t2^-1");
}

#[test]
fn burau_beta_prints_exact_coefficients() {
    let out = run(&["--format", "text", "burau-beta", "--braid", "1 2 3 4 1 2", "--n", "5", "--r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "β_1 = -3/5 - 1/5*c");
}

#[test]
fn splice_exceptional_corrections() {
    let side = r#"{"sigma": 0, "eta": 0, "defect": 0, "slope": 1, "admissible": true}"#;
    let input = tmp("splice.json", &format!(r#"{{"first": {side}, "second": {side}}}"#));
    let out = run(&["splice", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["branch"], "exceptional");
    assert_eq!(v["delta_sigma"], 1);
    assert_eq!(v["delta_eta"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["slope"]).status.code(), Some(1));
    assert_eq!(run(&["slope", "--pd", "missing.pd", "--character", "-1"]).status.code(), Some(1));
    let inadmissible = run(&["slope", "--pd", &corpus("hopf.pd"), "--character", "root:1/2"]);
    assert_eq!(inadmissible.status.code(), Some(2));
    assert_eq!(run(&["--tol", "0", "corpus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn tangle_and_skein_subcommands() {
    let out = run(&["tangle-slope", "--tangle", &corpus("tangle_tau_zero.tangle"), "--character", "root:1/3,root:1/3"]);
    assert_eq!(json(&out)["slope"]["finite"], serde_json::json!([1.0, 0.0]));
    let out = run(&["skein-check", "--pd", &corpus("trefoil.pd"), "--crossing", "0", "--character", "root:1/5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["consistent"], true);
}

#[test]
fn corpus_runs_and_names_a_perturbed_case() {
    let out = run(&["corpus"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["failed"], 0);

    let manifest = include_str!("../../linkslope/corpus/manifest.json")
        .replace(r#""character": "root:1/2", "expect": 4"#, r#""character": "root:1/2", "expect": 5"#);
    let path = tmp("perturbed.json", &manifest);
    let out = run(&["corpus", "--manifest", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["failed"], 1);
    let failed: Vec<_> = v["results"].as_array().unwrap().iter().filter(|r| r["passed"] == false).collect();
    assert_eq!(failed[0]["name"], "whitehead_at_minus_one");

    let empty = tmp("empty.json", r#"{"schema_version": 1}"#);
    let out = run(&["corpus", "--manifest", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["warnings"][0], "manifest has no cases");
}
