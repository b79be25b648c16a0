//! End-to-end tests against the built binary.

use std::io::Write;
use std::process::{Command, Stdio};

fn run(script: &str, extra: &[&str]) -> (String, String, Option<i32>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_derees"));
    cmd.arg("-").args(extra);
    cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(script.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code(),
    )
}

const PLANE: &str = "ring R = poly(x:0, y:0);\n\
                     ideal I = (x, y);\n\
                     blowup B = blowup(R, I);\n\
                     report charts(B);\n";

#[test]
fn plane_origin_charts_isomorphic() {
    let (stdout, _, code) = run(PLANE, &["--json"]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let verdicts = v["reports"][0]["verdicts"].as_array().unwrap();
    assert!(verdicts
        .iter()
        .any(|w| w["name"] == "chart_1_pi0_comparison" && w["status"] == "isomorphic"));
    // every verdict carries its bounds
    for w in verdicts {
        assert!(w["bounds"].is_object() && !w["bounds"].as_object().unwrap().is_empty());
    }
}

#[test]
fn sym_module_nonconnective_at_minus_one() {
    let script = "ring A = poly();\n\
                  rees E = rees_sym(A, module(0));\n\
                  report connectivity(E, hmin=-3, cutoff=6);\n";
    let (stdout, _, code) = run(script, &["--json"]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let verdicts = v["reports"][0]["verdicts"].as_array().unwrap();
    assert!(verdicts
        .iter()
        .any(|w| w["name"] == "H_-1" && w["status"] == "nonzero"));
    assert!(verdicts
        .iter()
        .any(|w| w["name"] == "H_-2" && w["status"] == "zero"));
}

#[test]
fn empty_script_is_ok() {
    let (stdout, _, code) = run("", &["--json"]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["reports"].as_array().unwrap().is_empty());
}

#[test]
fn syntax_error_exits_with_one() {
    let (_, stderr, code) = run("ideal I = (x^2 x);", &[]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("parse error"));
}

#[test]
fn json_output_is_deterministic() {
    let script = "ring R = poly(x:0);\n\
                  ideal I = (x);\n\
                  rees E = rees_ext(R, I);\n\
                  report connectivity(E, hmin=-2, cutoff=8);\n\
                  report fibers(E, range=[-2,3]);\n\
                  report cotangent(R, I, n=1);\n";
    let (a, _, ca) = run(script, &["--json"]);
    let (b, _, cb) = run(script, &["--json"]);
    assert_eq!(ca, Some(0));
    assert_eq!(cb, Some(0));
    assert_eq!(a, b);
}
