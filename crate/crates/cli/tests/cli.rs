use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn dj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dj"))
        .args(args)
        .env("DJ_COLOR", "0")
        .output()
        .expect("dj runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn judge_weather() {
    let out = dj(&["judge", path(&fixture("weather.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "T_i: {t}\nstatus t: justifiable\ndecisive: {s, s3}\nclear-cut: yes\n"
    );
}

#[test]
fn judge_flicker_json() {
    let out = dj(&["judge", path(&fixture("flicker.json")), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["judgment"], serde_json::json!([]));
    assert_eq!(v["statuses"]["t"], "neither");
    assert_eq!(v["clear_cut"], false);
}

#[test]
fn check_budget_all() {
    let out = dj(&["check", path(&fixture("budget.json")), "--gamma-all"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("cac: pass\nj: 2\nk: 2\n"), "{text}");
}

#[test]
fn check_failure_exits_one_with_witness() {
    let out = dj(&["check", path(&fixture("flicker.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("cac: fail"), "{text}");
    assert!(text.contains("answerability: fail (s2, s1)"), "{text}");
}

#[test]
fn gamma_file_formats() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("gamma.json");
    fs::write(&json, r#"["s1", "s2", "s3"]"#).unwrap();
    let plain = dir.path().join("gamma.txt");
    fs::write(&plain, "s1, s2\ns3\n").unwrap();
    let weather = fixture("weather.json");
    let a = dj(&["check", path(&weather), "--gamma-file", path(&json)]);
    let b = dj(&["check", path(&weather), "--gamma-file", path(&plain)]);
    let c = dj(&["check", path(&weather), "--gamma", "s1,s2,s3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert!(stdout(&a).starts_with("gamma: {s1, s2, s3}\n"));
}

#[test]
fn check_json_is_a_certificate() {
    let out = dj(&["check", path(&fixture("budget.json")), "--gamma-all", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = dj_core::CheckReportDoc::parse(&stdout(&out)).unwrap();
    let sit = dj_core::fixtures::budget();
    dj_core::report::verify_certificate(&sit, &sit.all_args(), &doc).unwrap();
    assert_eq!((doc.j, doc.k), (Some(2), Some(2)));
}

#[test]
fn validate_bad_weather_model() {
    let dir = TempDir::new().unwrap();
    let model = dir.path().join("bad.json");
    fs::write(&model, r#"{"format": "dj-model/1", "support": [["s1", "t"]], "counters": []}"#).unwrap();
    let out = dj(&["validate", path(&fixture("weather.json")), "--model", path(&model)]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("validity: invalid"), "{text}");
    assert!(text.contains("failure: uncountered-trumper (s1, s2)"), "{text}");
}

#[test]
fn validate_budget_model() {
    let out = dj(&[
        "validate",
        path(&fixture("budget.json")),
        "--model",
        path(&fixture("budget_model.json")),
        "--gamma-all",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("validity: valid\nclaims: {t}\n"));
}

#[test]
fn synth_then_validate() {
    let dir = TempDir::new().unwrap();
    let out = dj(&["synth", path(&fixture("weather.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let model = dir.path().join("model.json");
    fs::write(&model, &out.stdout).unwrap();
    let out = dj(&["validate", path(&fixture("weather.json")), "--model", path(&model)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn synth_refuses_flicker() {
    let out = dj(&["synth", path(&fixture("flicker.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not clear-cut"));
}

#[test]
fn extract_budget() {
    let out = dj(&["extract", path(&fixture("budget.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("efficient: yes\ngamma: {sr}\ncac: pass\n"));
    let out = dj(&["extract", path(&fixture("flicker.json")), "--set", "s1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("efficient: no"));
}

#[test]
fn dialogue_budget_static() {
    let out = dj(&[
        "dialogue",
        path(&fixture("budget.json")),
        "--model",
        path(&fixture("budget_model.json")),
        "--agent",
        "static",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("query: support (s, t) -> yes [p1]\n"), "{text}");
    assert!(text.contains("verdict: valid\nqueries: 10\n"), "{text}");
}

#[test]
fn dialogue_json_replays() {
    let out = dj(&[
        "dialogue",
        path(&fixture("flicker.json")),
        "--model",
        path(&fixture("budget_model.json")),
        "--agent",
        "cyclic",
    ]);
    // The budget model names arguments flicker lacks.
    assert_eq!(out.status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let model = dir.path().join("m.json");
    fs::write(&model, r#"{"format": "dj-model/1", "support": [], "counters": []}"#).unwrap();
    let out = dj(&[
        "dialogue",
        path(&fixture("flicker.json")),
        "--model",
        path(&model),
        "--agent",
        "drift",
        "--agent-seed",
        "5",
        "--budget",
        "3",
        "--json",
    ]);
    let doc = dj_core::TranscriptDoc::parse(&stdout(&out)).unwrap();
    let sit = dj_core::fixtures::flicker();
    assert!(dj_core::dialogue::replay_transcript(&sit, &doc));
    assert_eq!(doc.budget, 3);
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, r#"{"format": "dj-situation/9"}"#).unwrap();
    for args in [
        vec!["judge", "/nonexistent/file.json"],
        vec!["judge", path(&broken)],
        vec!["check", path(&fixture("weather.json")), "--gamma", "zz"],
        vec!["fuzz", "--count", "1", "--profile", "odd"],
        vec!["fuzz", "--count", "1", "--checks", "nonsense"],
        vec!["nosuchcommand"],
    ] {
        let out = dj(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn no_styling_when_disabled() {
    let out = dj(&["check", path(&fixture("budget.json"))]);
    assert!(!out.stdout.contains(&0x1b));
}

fn comparable(out: &Output) -> Vec<u8> {
    let text = stdout(out);
    let at = text.find("\"metadata\"").expect("metadata block");
    text.as_bytes()[..at].to_vec()
}

#[test]
fn fuzz_comparable_section_is_deterministic() {
    let args = ["fuzz", "--count", "60", "--seed", "7", "--json"];
    let a = dj(&args);
    let b = dj(&args);
    assert_eq!(comparable(&a), comparable(&b));
    let other = dj(&["fuzz", "--count", "60", "--seed", "8", "--json"]);
    assert_ne!(comparable(&a), comparable(&other));
}

#[test]
fn fuzz_single_profile_and_checks() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = dj(&[
        "fuzz",
        "--count",
        "20",
        "--seed",
        "3",
        "--profile",
        "cac-enforced",
        "--checks",
        "cac-bundle,lemmas",
        "--output",
        path(&report),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["format"], "dj-fuzz-report/1");
    assert_eq!(v["comparable"]["checks"], serde_json::json!(["cac-bundle", "lemmas"]));
    assert_eq!(v["comparable"]["instances_by_profile"]["cac-enforced"], 20);
}
