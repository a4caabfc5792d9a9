use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn akashi(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_akashi"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .expect("piped")
        .write_all(stdin.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary exits")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| x.as_str().expect("string").to_string())
        .collect()
}

const GL2_FLAGS: [&str; 4] = ["--assume", "mhg", "--assume", "no-cm"];

#[test]
fn wprep_separates_mu_and_lambda() {
    let out = json(&akashi(&["wprep"], r#"{"p": 5, "N": 6, "D": 8, "coeffs": [25, 5, 5]}"#));
    assert_eq!(out["mu"], 1);
    assert_eq!(out["lambda"], 1);
    assert_eq!(strings(&out["distinguished"]).len(), 2);
    assert_eq!(out["char_element"]["leading_valuation"], 2);
}

#[test]
fn char_of_a_diagonal_presentation() {
    let doc = r#"{"form": "presentation", "P": [[[-3, 1], [0]], [[0], [9, 0, 1]]]}"#;
    let out = json(&akashi(&["--prime", "3", "--p-prec", "4", "--t-deg", "6", "char"], doc));
    assert_eq!(out["mu"], 0);
    assert_eq!(out["lambda"], 3);
    assert_eq!(out["text"], "T^3 - 3*T^2 + 9*T - 27");
}

#[test]
fn finite_forms_are_pseudo_null() {
    let doc = r#"{"form": "finite", "p": 3, "N": 3, "orders": [2], "theta": [[0]]}"#;
    let out = json(&akashi(&["char"], doc));
    assert_eq!(out["text"], "1");
}

#[test]
fn akashi_of_a_trivial_action() {
    let doc = r#"{"form": "presentation", "p": 3, "N": 4, "D": 6, "P": [[[3, 1]]], "d": 2}"#;
    let out = json(&akashi(&["akashi"], doc));
    let lambdas: Vec<u64> = out["homology_chars"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["lambda"].as_u64().unwrap())
        .collect();
    assert_eq!(lambdas, [1, 2, 1]);
    assert_eq!(out["akashi"]["text"], "1");
}

#[test]
fn induce_substitutes_the_tower() {
    let doc = r#"{"form": "presentation", "p": 5, "N": 4, "D": 10, "P": [[[0, 1]]]}"#;
    let out = json(&akashi(&["induce", "--c", "1"], doc));
    assert_eq!(out["char_element"]["lambda"], 5);
    assert_eq!(out["char_element"]["ord_at_zero"], 1);
    assert_eq!(out["module"]["form"], "presentation");
}

#[test]
fn euler_factors_from_a_curve() {
    let out = json(&akashi(
        &["--prime", "5", "euler"],
        r#"{"a": [0, -1, 1, -10, -20], "ells": [2, 3, 7]}"#,
    ));
    let rows = out.as_array().unwrap();
    let points: Vec<u64> = rows.iter().map(|r| r["points"].as_u64().unwrap()).collect();
    assert_eq!(points, [5, 5, 10]);
    assert_eq!(rows[0]["value"]["num"], "5");
    assert_eq!(rows[0]["value"]["den"], "2");
    assert_eq!(rows[2]["valuation"], 1);
}

#[test]
fn euler_factor_of_a_place() {
    let doc = r#"{"ell": 11, "f_deg": 1, "reduction": "split_mult", "a_v": 1, "c_v": 0}"#;
    let out = json(&akashi(&["--prime", "5", "euler"], doc));
    assert_eq!(out[0]["value"]["num"], "10");
    assert_eq!(out[0]["value"]["den"], "11");
    assert_eq!(out[0]["valuation"], 1);
}

#[test]
fn local_series_constant_term() {
    let doc = r#"{"ell": 11, "f_deg": 1, "reduction": "split_mult", "a_v": 1, "c_v": 0, "p": 5, "N": 6, "D": 6}"#;
    let out = json(&akashi(&["local-series"], doc));
    assert_eq!(out["leading_valuation"], 1);
    assert_eq!(out["ord_at_zero"], 0);
}

#[test]
fn assemble_main_counts_extra_zeros() {
    let doc = r#"{"f_cyc": {"mu": 0, "distinguished": [5, 1]}, "r": 1}"#;
    let args = [
        "--prime",
        "5",
        "--p-prec",
        "6",
        "--assume",
        "strongly-admissible",
        "--assume",
        "reduction-condition",
        "--assume",
        "mhg",
        "assemble-main",
    ];
    let out = json(&akashi(&args, doc));
    assert_eq!(out["ord_at_zero"], 1);
    assert_eq!(out["leading_valuation"], 1);
    assert_eq!(out["consistent"], true);
    assert_eq!(
        strings(&out["assumptions"]),
        ["strongly-admissible", "reduction-condition", "mhg"]
    );
}

#[test]
fn assemble_gl2_with_a_split_place() {
    let doc = r#"{"f_cyc": {"mu": 0, "distinguished": [1]}, "r_places": [{"u": 6}]}"#;
    let mut args = vec![
        "--prime",
        "5",
        "--p-prec",
        "6",
        "--t-deg",
        "6",
        "--report",
        "assemble-gl2",
    ];
    args.extend(GL2_FLAGS);
    let raw = akashi(&args, doc);
    let out = json(&raw);
    assert_eq!(out["rhs"]["text"], "T - 5");
    assert_eq!(out["leading_valuation"], 1);
    let table = String::from_utf8(raw.stderr).unwrap();
    assert!(table.contains("twist[0]"), "{table}");
}

#[test]
fn euler_char_sums_valuations() {
    let doc = r#"{"m_places": [{"ell": 11, "f_deg": 1, "reduction": "split_mult", "a_v": 1, "c_v": 0}],
                  "r_places": [{"u": 6}]}"#;
    let mut args = vec!["--prime", "5", "euler-char"];
    args.extend(GL2_FLAGS);
    let out = json(&akashi(&args, doc));
    assert_eq!(out["total"], 2);
}

#[test]
fn missing_hypotheses_exit_with_code_three() {
    let doc = r#"{"f_cyc": {"mu": 0, "distinguished": [1]}}"#;
    let out = akashi(&["--prime", "5", "--p-prec", "4", "--t-deg", "4", "assemble-gl2"], doc);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-cm"));
}

#[test]
fn precision_failures_exit_with_code_two() {
    let out = akashi(
        &["--prime", "5", "--p-prec", "3", "--t-deg", "4", "wprep"],
        r#"{"coeffs": [0]}"#,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_input_exits_with_code_one() {
    assert_eq!(akashi(&["wprep"], "not json").status.code(), Some(1));
    let out = akashi(&["--prime", "7", "wprep"], r#"{"p": 5, "N": 3, "D": 3, "coeffs": [1]}"#);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn identical_inputs_give_identical_reports() {
    let doc = r#"{"f_cyc": {"mu": 1, "distinguished": [5, 1]},
                  "m_places": [{"ell": 11, "f_deg": 1, "reduction": "split_mult", "a_v": 1, "c_v": 1}],
                  "r_places": [{"u": 6, "c_v": 1}]}"#;
    let mut args = vec!["--prime", "5", "--p-prec", "6", "--t-deg", "8", "assemble-gl2"];
    args.extend(GL2_FLAGS);
    let a = akashi(&args, doc);
    let b = akashi(&args, doc);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn oracle_fuzz_reports_no_mismatches() {
    let out = json(&akashi(&["oracle-fuzz", "--seed", "11", "--count", "10"], ""));
    assert_eq!(out["instances"], 10);
    assert!(out["mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn input_from_a_file_and_output_to_a_file() {
    let dir = std::env::temp_dir().join(format!("akashi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("series.json");
    let output = dir.join("out.json");
    std::fs::write(&input, r#"{"p": 3, "N": 4, "D": 4, "coeffs": [3, 1]}"#).unwrap();
    let out = akashi(&["wprep", input.to_str().unwrap(), "-o", output.to_str().unwrap()], "");
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["lambda"], 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
