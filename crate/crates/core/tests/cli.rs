//! The command line front end, driven in-process.

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("iwasawa").chain(args.iter().copied());
    let code = iwasawa::cli::run(argv, &mut out);
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn call_json(args: &[&str]) -> (i32, Value) {
    let (code, text) = call(args);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}")))
}

fn error_kind(v: &Value) -> &str {
    v["error"]["kind"].as_str().expect("error object")
}

#[test]
fn mulam_of_mixed_series() {
    let (code, v) = call_json(&["mulam", "--series", &data("series_mixed.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["mu"], 0);
    assert_eq!(v["lambda"], 4);
}

#[test]
fn dirac_measure_with_overrides() {
    let (code, v) = call_json(&["mahler", "--dirac", "3", "--p", "2", "--digits", "10", "--tdeg", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["p"], 2);
    assert_eq!(v["N"], 10);
    // (1 + T)^3
    let coeffs: Vec<&str> = v["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["2^0 * 1 mod 2^10", "2^0 * 3 mod 2^10", "2^0 * 3 mod 2^10", "2^0 * 1 mod 2^10"]);
}

#[test]
fn negative_dirac_is_accepted() {
    let (code, _) = call_json(&["mahler", "--dirac", "-5", "--p", "3", "--digits", "8", "--tdeg", "6"]);
    assert_eq!(code, 0);
}

#[test]
fn invariance_on_good_and_corrupt_scenarios() {
    let (code, v) = call_json(&["euler", "--scenario", &data("scenario.json"), "--check", "invariance", "--r", "q1q2"]);
    assert_eq!(code, 0);
    assert_eq!(v["invariant"], true);
    let (code, v) = call_json(&["euler", "--scenario", &data("scenario_corrupt.json"), "--check", "invariance", "--r", "q1"]);
    assert_eq!(code, 0);
    assert_eq!(v["invariant"], false);
}

#[test]
fn input_errors_exit_two() {
    let (code, v) = call_json(&["mulam", "--series", "/nonexistent/series.json"]);
    assert_eq!(code, 2);
    assert_eq!(error_kind(&v), "Io");

    let (code, v) = call_json(&["lp", "--measure", &data("dirac_sum.json"), "--chi", "1", "--s", "0"]);
    assert_eq!(code, 2);
    assert_eq!(error_kind(&v), "Parse");

    let (code, v) = call_json(&["no-such-command"]);
    assert_eq!(code, 2);
    assert_eq!(error_kind(&v), "Parse");
}

#[test]
fn computation_errors_exit_one() {
    let f = data("series_mixed.json");
    let (code, v) = call_json(&["divide", "--series", &f, "--by", &f]);
    assert_eq!(code, 1);
    assert_eq!(error_kind(&v), "DomainError");
}

#[test]
fn output_is_deterministic() {
    let jobs: [&[&str]; 3] = [
        &["charideal", "--matrix", &data("presentation.json")],
        &["coleman", "--series", &data("cyclotomic_unit.json")],
        &["euler", "--scenario", &data("scenario.json"), "--check", "telescope", "--seed", "7"],
    ];
    for job in jobs {
        let first = call(job);
        assert_eq!(first.0, 0, "{job:?}: {}", first.1);
        assert_eq!(first, call(job), "{job:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("iwasawa-cli-{}.json", std::process::id()));
    let target = path.to_str().unwrap();
    let (code, text) = call(&["mulam", "--series", &data("series_mixed.json"), "--out", target]);
    assert_eq!(code, 0);
    assert!(text.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["lambda"], 4);
}

#[test]
fn invariants_table() {
    let (code, text) = call(&["invariants", "--series", &data("series_t_plus_2.json"), "--levels", "2..4", "--table"]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count(), 3, "{text}");
}
