use std::process::Command;

use ortho_lift_cli::{main_with_args, EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lift").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: stdout {out:?}, stderr {err:?}"));
    (code, v)
}

#[test]
fn hecke_check_reports_formal_first_eigenvalue() {
    let (code, v) = report(&["hecke-check", "--n", "1", "--p", "2", "--formal"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "hecke-check");
    assert_eq!(v["pass"], true);
    assert!(v.to_string().contains("16Λ^2 + 238"), "{v}");
}

#[test]
fn ors_lfactor_has_degree_twelve() {
    let (code, v) = report(&["lfactor", "--mode", "ors", "--n", "1", "--p", "2", "--delta"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v["results"]["denominator_degree"], 12);
}

#[test]
fn enumerate_norm_one_lists_roots() {
    let (code, out, _) = run(&["enumerate", "--m", "1"]);
    assert_eq!(code, EXIT_PASS);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("norm,content,x1"));
    assert_eq!(lines.count(), 240);
}

#[test]
fn enumerate_on_e8_squared() {
    let (code, out, _) = run(&["enumerate", "--n", "2", "--m", "1"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.lines().count() - 1, 480);
    let (_, out, _) = run(&["enumerate", "--m", "2"]);
    assert_eq!(out.lines().count() - 1, 2160);
}

#[test]
fn maass_relation_passes_on_formal_grid() {
    let (code, v) = report(&["maass-relation", "--n", "1", "--p", "3", "--e", "1", "--formal"]);
    assert_eq!(code, EXIT_PASS, "{v}");
}

#[test]
fn ors_check_exit_codes() {
    let (code, v) = report(&["ors-check"]);
    assert_eq!(code, EXIT_CHECK_FAILED, "{v}");
    assert_eq!(v["pass"], false);
    let (code, _) = report(&["ors-check", "--kappa", "16"]);
    assert_eq!(code, EXIT_PASS);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["hecke-check", "--bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&[]).0, EXIT_USAGE);
    assert_eq!(run(&["mu", "--p", "4"]).0, EXIT_USAGE);
    let (code, _, err) = run(&["enumerate", "--gram", "/nonexistent/gram.json", "--m", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("error"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).0, EXIT_PASS);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        &["emot", "--a", "12.566370614359172", "--p", "6.283185307179586", "--r", "9.5337"][..],
        &["resum", "--y", "0.8", "--bound", "3"][..],
        &["satake-check", "--mode", "maass", "--n", "2", "--p", "3"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a, b, "{args:?}");
        assert_eq!(a.0, EXIT_PASS, "{}", a.1);
    }
}

#[test]
fn invariance_with_synthetic_data_uses_swap_as_control() {
    let (code, v) = report(&["invariance", "--y", "0.9", "--bound", "4", "--x", "0.1,0,0,0,0,0,-0.2,0"]);
    assert_eq!(code, EXIT_PASS, "{v}");
    let rows = v["results"]["elements"].as_array().unwrap();
    let swap = rows.iter().find(|r| r["element"] == "swap").unwrap();
    assert_eq!(swap["negative_control"], true);
    assert!(swap["residual"].as_f64().unwrap() > 1e-4);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("lift-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mu.json");
    let (code, out, _) = run(&["mu", "--p", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "mu");
    std::fs::remove_dir_all(&dir).unwrap();
}

fn binary(profile: &str, args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_lift"))
        .args(args)
        .env("LIFT_TOLERANCE_PROFILE", profile)
        .output()
        .unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

#[test]
fn tolerance_profile_from_environment() {
    let args = ["emot", "--a", "12.566370614359172", "--p", "3.141592653589793", "--r", "0"];
    let (code, v) = binary("strict", &args);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(v["inputs"]["tol"].as_f64().unwrap(), 1e-10);
    let (_, v) = binary("loose", &args);
    assert_eq!(v["inputs"]["tol"].as_f64().unwrap(), 1e-6);
    let (code, _) = binary("sloppy", &args);
    assert_eq!(code, EXIT_USAGE);
}
