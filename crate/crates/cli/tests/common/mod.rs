#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_resotunnel"))
}

pub fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Data rows of a CSV document as string fields (comments and header
/// dropped).
pub fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

pub fn header(csv: &str) -> Vec<String> {
    csv.lines().find(|l| !l.starts_with('#')).unwrap().split(',').map(str::to_string).collect()
}

pub fn column(csv: &str, name: &str) -> Vec<f64> {
    let idx = header(csv).iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows(csv).iter().map(|r| r[idx].parse().unwrap()).collect()
}

pub fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}
