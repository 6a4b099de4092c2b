use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use subshift_cli::{Outcome, ReportDocument};

fn shifts_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../shifts")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subshift")).args(args).current_dir(shifts_dir()).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn language_query() {
    let out = run(&["lang", "even.json", "010"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["outcome"], "computed");
    assert_eq!(doc["report"]["in_language"], false);
    assert_eq!(json(&run(&["lang", "even", "0110"]))["report"]["in_language"], true);
}

#[test]
fn input_errors_exit_2() {
    for args in [
        &["lang", "no-such-shift.json", "0"][..],
        &["lang", "even.json", "2"],
        &["paction", "even", "1", "zz"],
        &["reproduce", "no-such-example"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let doc = json(&out);
        assert_eq!(doc["outcome"], "input-error");
        assert!(doc["error"].is_string());
    }
    // argument errors are rejected by the parser before any report
    assert_eq!(run(&["cost", "even", "--B", "0"]).status.code(), Some(2));
}

#[test]
fn exit_codes_by_outcome() {
    assert_eq!(Outcome::Computed.exit_code(), 0);
    assert_eq!(Outcome::PropertyFailed.exit_code(), 1);
    assert_eq!(Outcome::InputError.exit_code(), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["criteria", "even.json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reports_round_trip() {
    for args in [
        &["criteria", "markov3"][..],
        &["cost", "even", "--B", "0", "--sup"],
        &["spectrum", "golden", "(0)", "--radius", "2"],
        &["follower", "even", "01", "011"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let text = String::from_utf8(out.stdout).unwrap();
        let doc: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc.to_json(), text);
    }
}

#[test]
fn criteria_verdicts() {
    let doc = json(&run(&["criteria", "even", "--only", "simple"]));
    assert_eq!(doc["report"]["verdicts"]["simple"]["value"], false);
    let doc = json(&run(&["criteria", "markov3"]));
    let v = &doc["report"]["verdicts"];
    assert_eq!(v["simple"]["value"], true);
    assert_eq!(v["surjective"]["value"], false);
    let doc = json(&run(&["criteria", "pow2", "--depth", "16"]));
    assert_eq!(doc["confidence"]["kind"], "bounded");
}

#[test]
fn cost_queries() {
    let doc = json(&run(&["cost", "pow2", "--B", "0", "--x", "111111(0)"]));
    assert_eq!(doc["report"]["cost"], "2");
    let doc = json(&run(&["cost", "markov3", "--B", "2", "--sup", "--thomsen"]));
    assert_eq!(doc["report"]["cost"], "inf");
    assert_eq!(doc["report"]["attained_at"], "1(2)");
}

#[test]
fn spectrum_writes_dot() {
    let dir = std::env::temp_dir().join(format!("subshift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("ball.dot");
    let report = dir.join("report.json");
    let out = run(&[
        "limit",
        "even",
        "--family",
        "even-odd-ones",
        "--radius",
        "2",
        "--dot",
        dot.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["outcome"], "computed");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reproduce_all() {
    let out = run(&["reproduce", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    let runs = doc["report"].as_array().unwrap();
    assert_eq!(runs.len(), subshift_cli::reproduce::IDS.len());
    assert!(runs.iter().all(|r| r["pass"] == true));
}
