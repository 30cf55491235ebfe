use std::path::PathBuf;
use std::process::Command;

use twistram::cli::{run, EXIT_BUDGET, EXIT_HYPOTHESIS, EXIT_OK, EXIT_USAGE};
use twistram::flipsearch::FlipSearch;
use twistram::ramify::{RamificationCertificate, TableRow};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("twistram").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn assert_golden(args: &[&str], name: &str) {
    let (code, out, err) = invoke(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    assert_eq!(out, golden(name), "{args:?}");
}

#[test]
fn table_text_golden() {
    assert_golden(&["table", "--t", "29", "--d-min", "5", "--d-max", "45", "--format", "text"], "table_t29_5_45.txt");
}

#[test]
fn table_csv_golden() {
    assert_golden(&["table", "--t", "29", "--d-min", "5", "--d-max", "45", "--out", "csv"], "table_t29_5_45.csv");
}

#[test]
fn certify_golden() {
    assert_golden(&["certify", "--t", "29", "--d", "11"], "certify_t29_d11.json");
}

#[test]
fn search_golden() {
    assert_golden(&["search", "--t", "29", "--p", "3", "--q", "5", "--format", "text"], "search_t29_p3_q5.txt");
}

#[test]
fn charvar_golden() {
    assert_golden(&["charvar", "--t", "5", "--format", "text"], "charvar_t5.txt");
}

#[test]
fn norm_golden() {
    assert_golden(&["norm", "--t", "29", "--d", "7"], "norm_t29_d7.json");
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "--t", "29", "--d-min", "5", "--d-max", "45"];
    assert_eq!(invoke(&args), invoke(&args));
    let args = ["search", "--t", "29", "--p", "3", "--q", "5"];
    assert_eq!(invoke(&args), invoke(&args));
}

fn typed_round_trip<T: serde::de::DeserializeOwned + serde::Serialize>(args: &[&str]) {
    let (code, out, _) = invoke(args);
    assert_eq!(code, EXIT_OK, "{args:?}");
    let parsed: T = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", out, "{args:?}");
}

#[test]
fn json_round_trips() {
    typed_round_trip::<RamificationCertificate>(&["certify", "--t", "29", "--d", "45"]);
    typed_round_trip::<Vec<TableRow>>(&["table", "--t", "29", "--d-min", "5", "--d-max", "21"]);
    typed_round_trip::<FlipSearch>(&["search", "--t", "29", "--p", "3", "--q", "5"]);
    for args in [
        vec!["norm", "--t", "29", "--d", "15"],
        vec!["charvar", "--t", "7"],
        vec!["selftest"],
    ] {
        let (code, out, _) = invoke(&args);
        assert_eq!(code, EXIT_OK, "{args:?}");
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&value).unwrap()).unwrap();
        assert_eq!(again, value, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["certify", "--t", "29"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["--help"]).0, EXIT_OK);
    assert_eq!(invoke(&["certify", "--t", "28", "--d", "7"]).0, EXIT_HYPOTHESIS);
    assert_eq!(invoke(&["certify", "--t", "29", "--d", "8"]).0, EXIT_HYPOTHESIS);
    let (code, _, err) = invoke(&["search", "--t", "29", "--p", "3", "--q", "7"]);
    assert_eq!(code, EXIT_HYPOTHESIS);
    assert!(err.contains("21 ∤ 15"), "{err}");
    let starved = ["certify", "--t", "29", "--d", "61", "--rho-iter-cap", "1000", "--wall-ms", "2000"];
    assert_eq!(invoke(&starved).0, EXIT_BUDGET);
    assert_eq!(invoke(&["search", "--t", "29", "--p", "3", "--q", "5", "--exponent-cap", "2"]).0, EXIT_BUDGET);
}

#[test]
fn binary_reads_seed_from_environment() {
    let bin = env!("CARGO_BIN_EXE_twistram");
    let args = ["certify", "--t", "29", "--d", "23"];
    let base = Command::new(bin).args(args).env_remove("SEED").output().unwrap();
    let seeded = Command::new(bin).args(args).env("SEED", "12345").output().unwrap();
    assert_eq!(base.status.code(), Some(EXIT_OK));
    assert_eq!(seeded.status.code(), Some(EXIT_OK));
    assert_eq!(base.stdout, seeded.stdout);
    let bad = Command::new(bin).args(args).env("SEED", "not-a-number").output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
