use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const SQRT2: &str = r#"{"poly": [-2, 0, 1]}"#;

fn gs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gs")).args(args).output().expect("runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn instance(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "instances", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn house_of_sqrt2() {
    let out = gs(&["house", "--field", SQRT2, "--elem", "x", "--json-only"]);
    assert!(out.status.success());
    let v = json(&out);
    let (lo, hi) = (v["house"]["lo"].as_f64().unwrap(), v["house"]["hi"].as_f64().unwrap());
    assert!(lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= hi);
    assert_eq!(v["enclosures_overlap"], true);
    assert!(out.stderr.is_empty());
}

#[test]
fn norm_and_trace() {
    let out = gs(&["norm", "--field", SQRT2, "--elem", "3+x"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["norm"], "7");
    assert_eq!(v["trace"], "6");
    assert!(!out.stderr.is_empty(), "summary goes to stderr");
}

#[test]
fn minimal_polynomial() {
    let v = json(&gs(&["minpoly", "--field", SQRT2, "--elem", "1+x", "--json-only"]));
    assert_eq!(v["minpoly_text"], "x^2 - 2*x - 1");
}

#[test]
fn siegel_over_integers() {
    let out = gs(&["siegel", "--matrix", r#"{"field": "Q", "rows": [[2, 3]]}"#, "--json-only"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["vector"], serde_json::json!(["3", "-2"]));
    assert_eq!(v["exact_annihilation"], true);
    assert_eq!(v["bound_satisfied"], true);
}

#[test]
fn input_errors_exit_2() {
    let bad_elem = gs(&["norm", "--field", SQRT2, "--elem", "3+", "--json-only"]);
    assert_eq!(bad_elem.status.code(), Some(2));
    assert!(json(&bad_elem)["error"].as_str().unwrap().contains("end of input"));
    let reducible = gs(&["house", "--field", r#"{"poly": [-4, 0, 1]}"#, "--elem", "x", "--json-only"]);
    assert_eq!(reducible.status.code(), Some(2));
    assert_eq!(gs(&["bogus"]).status.code(), Some(2));
    assert_eq!(gs(&["pipeline", "--instance", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn synthetic_validation_passes() {
    let out = gs(&["synthetic-validate", "--instance", &instance("synthetic_sqrt2.json"), "--json-only"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["eq7"]["overlap"], true);
    assert!(v["eq7"]["combined_width"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["witness"]["r"], 2);
    // The echo is itself a runnable instance.
    let echo = v["echo"].to_string();
    let tmp = std::env::temp_dir().join(format!("gs-echo-{}.json", std::process::id()));
    std::fs::write(&tmp, echo).unwrap();
    let again = json(&gs(&["synthetic-validate", "--instance", tmp.to_str().unwrap(), "--json-only"]));
    std::fs::remove_file(&tmp).ok();
    assert_eq!(again["witness"], v["witness"]);
}

#[test]
fn threshold_of_demo_instance() {
    let out = gs(&["threshold", "--instance", &instance("demo_sqrt2.json"), "--json-only"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let log10_r = v["r_star_log10"].as_f64().unwrap();
    assert!((1000.0..1100.0).contains(&log10_r), "{log10_r}");
    assert_eq!(v["n_of_q_required_ge_r_star"], "holds");
}
