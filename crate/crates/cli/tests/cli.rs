//! End-to-end runs of the `effana` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn effana(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_effana"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const EX46_MEASURE: &str =
    r#"{"algebra":"ex.json","dim":1,"values":{"∅":[0],"X⁺":[1],"X⁻":[1],"Y⁺":[5],"Y⁻":[-3],"ℝ²":[2]}}"#;

/// The half-plane algebra as `ex.json` and the measure above as `mu.json`.
fn half_planes() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = effana(dir.path(), &["make", "example-4.6", "--out", "ex.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    fs::write(dir.path().join("mu.json"), EX46_MEASURE).unwrap();
    dir
}

#[test]
fn make_writes_valid_algebras() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["make", "powerset", "--n", "3", "--out", "a.json"][..],
        &["make", "scale", "--k", "10", "--out", "a.json"][..],
        &["make", "example-4.6", "--out", "a.json"][..],
    ] {
        assert_eq!(effana(dir.path(), args).status.code(), Some(0));
        let out = effana(dir.path(), &["validate", "a.json"]);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn make_without_out_prints_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = effana(dir.path(), &["make", "scale", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["names"].as_array().unwrap().len(), 3);
}

#[test]
fn validate_reports_broken_tables() {
    let dir = half_planes();
    let path = dir.path().join("ex.json");
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["sums"].as_array_mut().unwrap().push(serde_json::json!(["ℝ²", "X⁺", "ℝ²"]));
    fs::write(&path, doc.to_string()).unwrap();
    let out = effana(dir.path(), &["validate", "ex.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("E4"), "{}", stdout(&out));
}

#[test]
fn malformed_json_is_an_input_error_with_a_position() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{\"names\": [\"a\"\n \"b\"]}").unwrap();
    let out = effana(dir.path(), &["validate", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn missing_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(effana(dir.path(), &["validate", "nope.json"]).status.code(), Some(2));
}

#[test]
fn bad_tolerance_is_rejected() {
    let dir = half_planes();
    let out = effana(dir.path(), &["--tolerance", "0", "validate", "ex.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rdp_verdicts() {
    let dir = half_planes();
    effana(dir.path(), &["make", "scale", "--k", "10", "--out", "s.json"]);
    let holds = effana(dir.path(), &["rdp", "s.json"]);
    assert_eq!(holds.status.code(), Some(0));
    assert!(stdout(&holds).starts_with("RDP: holds"));
    let fails = effana(dir.path(), &["rdp", "ex.json"]);
    assert_eq!(fails.status.code(), Some(3));
    assert!(stdout(&fails).contains("RDP: fails; Y⁺ ≤ X⁺ ⊕ X⁻"), "{}", stdout(&fails));
}

#[test]
fn order_lists_atoms() {
    let dir = tempfile::tempdir().unwrap();
    effana(dir.path(), &["make", "powerset", "--n", "2", "--out", "p.json"]);
    let out = effana(dir.path(), &["order", "p.json"]);
    assert!(stdout(&out).starts_with("atoms: {1}, {2}"), "{}", stdout(&out));
}

#[test]
fn variation_of_the_half_plane_measure() {
    let dir = half_planes();
    for mode in ["multiset", "set"] {
        let out = effana(dir.path(), &["--mode", mode, "variation", "ex.json", "mu.json", "--witness"]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        assert!(text.contains(&format!("|μ|(ℝ²) = 8 ({mode})")), "{text}");
        assert!(text.contains("witness: {Y⁺, Y⁻}"), "{text}");
    }
}

#[test]
fn ascii_element_names_are_folded() {
    let dir = half_planes();
    let out = effana(dir.path(), &["--format", "json", "variation", "ex.json", "mu.json", "--element", "Y-"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["element"], "Y⁻");
    assert_eq!(doc["value"], 3.0);
    let out = effana(dir.path(), &["variation", "ex.json", "mu.json", "--element", "R2"]);
    assert!(stdout(&out).contains("= 8"));
    let out = effana(dir.path(), &["variation", "ex.json", "mu.json", "--element", "Z"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn theorems_report_non_additivity() {
    let dir = half_planes();
    let out = effana(dir.path(), &["theorems", "ex.json", "mu.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[SKIP] subadditivity"), "{text}");
    assert!(!text.contains("[FAIL]"), "{text}");
    assert!(text.contains("|μ|(X⁺) + |μ|(X⁻) = 2 but |μ|(X⁺ ⊕ X⁻) = 8"), "{text}");
}

#[test]
fn check_flags_non_additive_measures() {
    let dir = half_planes();
    assert_eq!(effana(dir.path(), &["check", "ex.json", "mu.json"]).status.code(), Some(0));
    fs::write(dir.path().join("bad.json"), EX46_MEASURE.replace("\"ℝ²\":[2]", "\"ℝ²\":[3]")).unwrap();
    let out = effana(dir.path(), &["check", "ex.json", "bad.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("violate additivity"), "{}", stdout(&out));
}

#[test]
fn symbolic_restriction_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let out = effana(dir.path(), &["make", "symbolic", "--n", "3", "--out", "sym"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = effana(
        dir.path(),
        &["bounds", "sym/algebra.json", "sym/mu_1.json", "sym/mu_2.json", "sym/mu_3.json"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let b3 = rows.iter().find(|r| &r[0] == "B3").unwrap();
    assert_eq!(&b3[4], "3");
    let uniform = rows.iter().find(|r| &r[0] == "uniform").unwrap();
    assert_eq!(&uniform[4], "3");
}

#[test]
fn example_transcripts_verify() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["examples", "lemma-2.2", "--imax", "6", "--witness-count", "10"][..],
        &["examples", "example-2.3", "--n", "50"][..],
        &["examples", "example-3.3", "--n", "20"][..],
        &["examples", "example-4.6"][..],
    ] {
        let out = effana(dir.path(), args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}{}", stdout(&out), stderr(&out));
    }
    let out = effana(dir.path(), &["--format", "json", "examples", "lemma-2.2", "--imax", "5"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["claims"][0]["pairs"], 10);
}

#[test]
fn properties_pass_and_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let first = effana(dir.path(), &["properties"]);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    let text = stdout(&first);
    let total: usize = text
        .lines()
        .find_map(|l| l.strip_prefix("total: "))
        .and_then(|l| l.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(total > 1000, "{text}");
    let second = effana(dir.path(), &["properties"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(effana(dir.path(), &["properties", "--sizes", "1"]).status.code(), Some(0));
}

#[test]
fn injected_fault_is_caught_and_minimized() {
    let dir = tempfile::tempdir().unwrap();
    let out = effana(dir.path(), &["properties", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
}
