//! End-to-end runs of the installed binary: flag parsing, exit codes,
//! output formats and the determinism contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn isomix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isomix"))
        .args(args)
        .env_remove("ISOMIX_THREADS")
        .output()
        .expect("binary runs")
}

fn isomix_with_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isomix"))
        .args(args)
        .env("ISOMIX_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("isomix-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn zoo_listing_names_every_family() {
    let output = isomix(&["zoo"]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    for family in [
        "complete_graph",
        "lazy_path",
        "hypercube",
        "grid",
        "barbell",
        "biased_ring",
        "continuous_example",
        "two_block_sharp",
    ] {
        assert!(
            text.contains(family),
            "listing is missing {family}:\n{text}"
        );
    }
}

#[test]
fn analyze_reports_the_complete_graph_pair() {
    let output = isomix(&["analyze", "--zoo", "complete_graph", "4", "--set", "0,1"]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(doc["chain"]["n"], 4);
    assert_eq!(doc["chain"]["lazy"], true);
    assert_eq!(doc["set"], serde_json::json!([0, 1]));
    assert_eq!(doc["set_measure"], 0.5);
    assert_eq!(doc["record"]["psi_plus"], 0.125);
    assert_eq!(doc["record"]["conductance"], 0.25);
    assert!(doc["sandwich_plus"]["upper"].is_number());
}

#[test]
fn profile_rejects_a_non_stochastic_file() {
    let path = scratch("bad.json");
    std::fs::write(
        &path,
        r#"{"n":3,"P":[[0.5,0.5,0.2],[0.2,0.6,0.2],[0.1,0.1,0.8]]}"#,
    )
    .unwrap();
    let output = isomix(&[
        "profile",
        "--chain",
        path.to_str().unwrap(),
        "--quantity",
        "psi_plus",
    ]);
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(
        err.contains("not a probability distribution"),
        "unexpected stderr: {err}"
    );
}

#[test]
fn verify_complete_graph_is_clean() {
    let output = isomix(&["verify", "--zoo", "complete_graph", "4"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    assert!(text.contains("14 subsets"), "unexpected summary: {text}");
    assert!(
        text.contains("0 violation(s)"),
        "unexpected summary: {text}"
    );
}

#[test]
fn exported_zoo_chain_analyzes_identically() {
    let chain_path = scratch("k4.json");
    let export = isomix(&[
        "zoo",
        "complete_graph",
        "4",
        "--out",
        chain_path.to_str().unwrap(),
    ]);
    assert!(export.status.success());

    let from_file = isomix(&[
        "analyze",
        "--chain",
        chain_path.to_str().unwrap(),
        "--set",
        "0,1",
    ]);
    let from_zoo = isomix(&["analyze", "--zoo", "complete_graph", "4", "--set", "0,1"]);
    assert!(from_file.status.success() && from_zoo.status.success());
    assert_eq!(
        stdout_of(&from_file),
        stdout_of(&from_zoo),
        "export round trip must not perturb a single bit"
    );
}

#[test]
fn thread_count_does_not_change_profile_bytes() {
    let args = [
        "profile",
        "--zoo",
        "grid",
        "3",
        "2",
        "--quantity",
        "psi_plus",
    ];
    let single = isomix_with_threads("1", &args);
    let double = isomix_with_threads("2", &args);
    assert!(single.status.success() && double.status.success());
    assert_eq!(single.stdout, double.stdout);
    let text = stdout_of(&single);
    assert!(text.starts_with("x,value\n"), "missing csv header: {text}");
}

#[test]
fn bounds_json_carries_exact_times_and_caveat() {
    let output = isomix(&["bounds", "--zoo", "complete_graph", "4"]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(doc["tau_exact"], 2);
    assert_eq!(doc["chi2_exact"], 2);
    assert!(doc["bounds"]["chi2_spread_flat"].as_f64().unwrap() > 44.0);
    assert_eq!(doc["caveats"][0], "discrete-outer-sets");
}

#[test]
fn missing_source_is_a_usage_error() {
    let output = isomix(&["analyze", "--set", "0,1"]);
    assert_eq!(output.status.code(), Some(2));
    let output = isomix(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn oversized_enumeration_needs_the_acknowledgment_flag() {
    let refused = isomix(&["verify", "--zoo", "complete_graph", "23"]);
    assert_eq!(refused.status.code(), Some(2));
    let err = String::from_utf8(refused.stderr).unwrap();
    assert!(err.contains("23"), "unexpected stderr: {err}");
}
