use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

fn phi3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phi3")).args(args).env_remove("PHI3_CONFIG").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = phi3(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    phi3(args).status.code().unwrap()
}

#[test]
fn solve_reports_small_residual() {
    let v = json(&["solve", "--lambda", "0.2"]);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
    assert!((v["critical"]["lambda_c"].as_f64().unwrap() - 0.490686).abs() < 1e-5);
    let free = json(&["solve", "--lambda", "0"]);
    assert_eq!(free["c"]["re"].as_f64().unwrap(), 0.0);
}

#[test]
fn supercritical_coupling_exits_2() {
    let out = phi3(&["solve", "--lambda", "0.6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0.4906"));
}

#[test]
fn complex_coupling_squared() {
    let v = json(&["solve", "--lambda2", "-0.04"]);
    assert!(v["c"]["re"].as_f64().unwrap() > 0.0);
    assert_eq!(code(&["solve", "--lambda", "0.1", "--lambda2", "0.01"]), 2);
}

#[test]
fn eval_examples() {
    let v = json(&["eval", "--lambda", "0.3", "--boundaries", "1", "--boundaries", "1|2"]);
    let vals = v["values"].as_array().unwrap();
    assert_eq!(vals[0]["provenance"], "one_point");
    assert_eq!(vals[1]["provenance"], "cylinder");
    let zero = json(&["eval", "--lambda", "0", "--boundaries", "1,2,3"]);
    assert_eq!(zero["values"][0]["value"]["re"].as_f64().unwrap(), 0.0);
    let big = json(&["eval", "--lambda", "0.3", "--big-X", "4,9"]);
    assert_eq!(big["values"][0]["provenance"], "single_boundary");
}

#[test]
fn table_csv_shape() {
    let out = phi3(&[
        "--format", "csv", "table", "--lambda", "0.3", "--target", "w", "--from", "1", "--to", "100", "--steps", "100",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("arg,re,im"));
    assert_eq!(lines.count(), 100);
}

#[test]
fn s2_table_is_positive_and_decreasing() {
    let out = phi3(&[
        "--format", "csv", "table", "--lambda", "0.2", "--target", "s2", "--from", "0", "--to", "10", "--steps", "21",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let re: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(re.iter().all(|&v| v > 0.0));
    assert!(re.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn verify_suites() {
    let g = json(&["verify", "--suite", "gamma", "--max-b", "7"]);
    assert_eq!(g["passed"], true);
    let c = json(&["verify", "--suite", "conjecture", "--max-l", "2", "--max-n", "2"]);
    assert_eq!(c["passed"], true);
    let s = json(&["verify", "--suite", "schwinger", "--lambda", "0.3"]);
    assert_eq!(s["passed"], true);
}

#[test]
fn failing_checks_exit_1() {
    let out = phi3(&["verify", "--suite", "inteq", "--lambda", "0.3", "--tail", "truncated"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn schwinger_report_and_scan() {
    let v = json(&["schwinger", "--lambda", "0.3"]);
    assert_eq!(v["verdict"], "stieltjes_violated");
    assert_eq!(v["imaginary_part_sign"], "negative");
    let out = phi3(&["--format", "csv", "schwinger", "--lambda", "0.3", "--scan", "-3,1,-1,1", "--steps", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p2_re,p2_im,re,im,status"));
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn output_is_deterministic() {
    let args = ["eval", "--lambda", "0.25", "--boundaries", "1,2|3|4"];
    assert_eq!(phi3(&args).stdout, phi3(&args).stdout);
    let csv = ["--format", "csv", "table", "--lambda", "0.1", "--target", "g1", "--from", "0", "--to", "3"];
    assert_eq!(phi3(&csv).stdout, phi3(&csv).stdout);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi3.toml");
    std::fs::write(&path, "lambda = 0.2\nformat = \"csv\"\n").unwrap();
    let p = path.to_str().unwrap();
    let out = phi3(&["--config", p, "solve"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("lambda2_re,"));
    let out = phi3(&["--config", p, "--format", "json", "solve", "--lambda", "0.1"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["lambda2"]["re"].as_f64().unwrap() - 0.01).abs() < 1e-15);

    std::fs::write(&path, "lambda = 0.2\nbogus = 1\n").unwrap();
    assert_eq!(code(&["--config", p, "solve"]), 2);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = phi3(&["--output", path.to_str().unwrap(), "solve", "--lambda", "0.1"]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["c"]["re"].as_f64().unwrap() < 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn malformed_boundaries_exit_2(junk in "[a-z|,;#]{0,6}") {
        let spec = format!("{junk}|");
        prop_assert_eq!(code(&["eval", "--lambda", "0.2", "--boundaries", &spec]), 2);
    }

    #[test]
    fn malformed_numbers_exit_2(junk in "[a-z#%]{1,5}") {
        prop_assert_eq!(code(&["solve", "--lambda", &junk]), 2);
        prop_assert_eq!(code(&["table", "--lambda", "0.1", "--target", "w", "--from", &junk, "--to", "2"]), 2);
    }

    #[test]
    fn inverted_ranges_exit_2(a in 1.0f64..50.0, d in 0.0f64..10.0) {
        let (from, to) = (format!("{}", a + d), format!("{a}"));
        prop_assert_eq!(code(&["table", "--lambda", "0.1", "--target", "w", "--from", &from, "--to", &to]), 2);
    }

    #[test]
    fn off_cut_x_space_arguments_exit_2(x in -50.0f64..-0.01) {
        let spec = format!("{x}");
        prop_assert_eq!(code(&["eval", "--lambda", "0.2", "--boundaries", &spec]), 2);
    }
}
