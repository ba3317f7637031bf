use std::process::{Command, Output};

use serde_json::Value;

fn tmzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmzv")).args(args).env_remove("TMZV_PREC").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn mzv_leading_term() {
    let out = tmzv(&["mzv", "1,3", "--q", "2", "--prec", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "mzv");
    assert_eq!(v["field"]["q"], 2);
    assert_eq!(v["result"]["value"]["ord"], 2);
    assert_eq!(v["result"]["value"]["precision"], 40);
}

#[test]
fn verify_suites_exit_zero() {
    let out = tmzv(&["verify", "--suite", "interp,example13", "--prec", "60"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["passed"], true);
}

#[test]
fn output_does_not_depend_on_threads() {
    let run = |t: &str| tmzv(&["coproduct", "--index", "2,1,2", "--q", "3", "--prec", "40", "--threads", t]).stdout;
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
}

#[test]
fn text_format() {
    let out = tmzv(&["--format", "text", "logvec", "--index", "1,2", "--point", "1,θ", "--prec", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.trim_end().ends_with("PASS"), "{s}");
}

#[test]
fn bad_field_and_usage() {
    let out = tmzv(&["mzv", "1", "--q", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tmzv(&["mzv", "1", "--p", "2", "--modulus", "1,0,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x + 1"));
    let out = tmzv(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
