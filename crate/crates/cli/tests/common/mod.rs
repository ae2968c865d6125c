#![allow(dead_code)]

pub mod oracle;

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture_exports() -> Vec<PathBuf> {
    let dir = repo_root().join("fixtures/exports");
    let mut out: Vec<PathBuf> =
        std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.is_dir()).collect();
    out.sort();
    out
}

pub fn survey_fixture() -> PathBuf {
    repo_root().join("fixtures/survey.csv")
}

pub fn teamsignal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teamsignal")).args(args).output().expect("run teamsignal")
}

/// Standard emoji shortcodes, read straight from the bundled data file.
pub fn standard_emoji() -> HashSet<String> {
    std::fs::read_to_string(repo_root().join("crates/core/data/standard_emoji.txt"))
        .unwrap()
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Drop the lines that carry the generation time.
pub fn without_timestamps(text: &str) -> String {
    text.lines()
        .filter(|l| {
            !l.contains("\"generated_at\"") && !l.starts_with("meta,generated_at") && !l.starts_with("- Generated:")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
