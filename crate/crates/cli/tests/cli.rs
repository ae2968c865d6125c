mod common;

use std::path::Path;

use common::{fixture_exports, survey_fixture, teamsignal};

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    names
}

#[test]
fn one_team_without_survey() {
    let tmp = tempfile::tempdir().unwrap();
    let export = &fixture_exports()[0];
    let out = teamsignal(&["analyze", s(export), "--out-dir", s(tmp.path()), "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(files_in(tmp.path()), vec!["team2.report.json"]);
}

#[test]
fn survey_selects_and_compares() {
    let tmp = tempfile::tempdir().unwrap();
    let mut args = vec!["analyze".to_string()];
    args.extend(fixture_exports().iter().map(|p| s(p).to_string()));
    args.extend(
        ["--survey", s(&survey_fixture()), "--out-dir", s(tmp.path()), "--format", "markdown"].map(String::from),
    );
    let out = teamsignal(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(out.status.success(), "{}", stderr(&out));
    let md = std::fs::read_to_string(tmp.path().join("comparison.md")).unwrap();
    assert!(md.starts_with("# Team comparison: high `team2` vs low `team6`"), "{md}");
    assert!(files_in(tmp.path()).contains(&"survey_scores.csv".to_string()));
}

#[test]
fn selected_team_without_export_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let exports = fixture_exports();
    let out = teamsignal(&[
        "analyze",
        s(&exports[0]),
        s(&exports[1]),
        "--survey",
        s(&survey_fixture()),
        "--out-dir",
        s(tmp.path()),
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("team6"), "{}", stderr(&out));
}

#[test]
fn missing_export_names_the_path() {
    let out = teamsignal(&["analyze", "/definitely/not/here", "--out-dir", "/tmp/unused-teamsignal"]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("/definitely/not/here") && err.starts_with("error: ingest:"), "{err}");
}

#[test]
fn unknown_format_is_rejected() {
    let out = teamsignal(&["analyze", s(&fixture_exports()[0]), "--format", "yaml"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("yaml"));
}

#[test]
fn validate_reports_ok_and_warnings() {
    let out = teamsignal(&["validate", s(&fixture_exports()[0]), "--survey", s(&survey_fixture())]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("export team2: OK") && text.ends_with("OK\n"), "{text}");
    assert!(text.contains("survey: OK (180 responses, 6 teams, 3 periods)"), "{text}");

    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty");
    std::fs::create_dir_all(&empty).unwrap();
    std::fs::write(empty.join("channels.json"), "[]").unwrap();
    std::fs::write(empty.join("users.json"), "[]").unwrap();
    let out = teamsignal(&["validate", s(&empty)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("warning: export empty has zero messages"));
}

#[test]
fn corrupt_lexicon_names_its_entry() {
    let tmp = tempfile::tempdir().unwrap();
    let lex = tmp.path().join("lex.toml");
    std::fs::write(
        &lex,
        "[[category]]\nname = \"Voice\"\n\n[[category.sub_category]]\nname = \"Sorry\"\npatterns = [\"sorry\"]\n",
    )
    .unwrap();
    let out = teamsignal(&["validate", "--lexicon", s(&lex)]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("lexicon:") && err.contains("Sorry"), "{err}");
}

#[test]
fn lexicon_print_round_trips() {
    let out = teamsignal(&["lexicon", "print"]);
    assert!(out.status.success());
    let tmp = tempfile::tempdir().unwrap();
    let lex = tmp.path().join("printed.toml");
    std::fs::write(&lex, &out.stdout).unwrap();
    let again = teamsignal(&["lexicon", "print", "--lexicon", s(&lex)]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn concordance_formats() {
    let export = s(&fixture_exports()[0]).to_string();
    let text = teamsignal(&["concordance", &export, "--sub-category", "mistakes", "--context", "1"]);
    assert!(text.status.success(), "{}", stderr(&text));
    let jsonl =
        teamsignal(&["concordance", &export, "--sub-category", "Mistakes", "--format", "jsonl", "--context", "0"]);
    assert!(jsonl.status.success());
    let lines: Vec<serde_json::Value> = stdout(&jsonl).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());

    let report = teamsignal::parse_export(&fixture_exports()[0]).unwrap();
    let tab = teamsignal::lexicon::tabulate_keywords(&report, &teamsignal::default_lexicon());
    assert_eq!(lines.len() as u64, tab.row("Mistakes").unwrap().messages.numer());

    let bad = teamsignal(&["concordance", &export, "--sub-category", "Nope"]);
    assert!(!bad.status.success());
    assert!(stderr(&bad).contains("valid names"));
}

#[test]
fn redaction_flag_removes_user() {
    let tmp = tempfile::tempdir().unwrap();
    let ids = tmp.path().join("ids.txt");
    std::fs::write(&ids, "U001\n").unwrap();
    let export = s(&fixture_exports()[0]).to_string();
    let plain = teamsignal(&["validate", &export]);
    let redacted = teamsignal(&["validate", &export, "--redact", s(&ids)]);
    assert!(redacted.status.success());
    assert_ne!(stdout(&plain), stdout(&redacted));
}
