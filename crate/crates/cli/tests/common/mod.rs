#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_screening"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Machine-readable invocations pinned by golden files.
pub const RECIPES: &[(&str, &[&str])] = &[
    (
        "eval_waterloo",
        &[
            "--json",
            "eval",
            "--population",
            "601220",
            "--infected",
            "8",
            "--test",
            "hutchison",
        ],
    ),
    (
        "eval_clinic",
        &[
            "--json",
            "eval",
            "--population",
            "18",
            "--infected",
            "1",
            "--test",
            "hutchison",
        ],
    ),
    (
        "repeat_biomedomics_k1",
        &[
            "--json",
            "repeat",
            "--test",
            "biomedomics",
            "--prevalence",
            "0.5",
            "--k",
            "1",
            "--kind",
            "first-positive",
        ],
    ),
    (
        "repeat_hutchison_k3",
        &[
            "--json",
            "repeat",
            "--test",
            "hutchison",
            "--prevalence",
            "0.5",
            "--k",
            "3",
            "--kind",
            "all-negative",
        ],
    ),
    (
        "discharge_hutchison",
        &[
            "--json",
            "discharge",
            "--test",
            "hutchison",
            "--prevalence",
            "0.2,0.4,0.5,0.7,0.8",
            "--tolerance",
            "0.05",
        ],
    ),
    (
        "discharge_biomedomics",
        &[
            "--json",
            "discharge",
            "--test",
            "biomedomics",
            "--prevalence",
            "0.5,0.8",
            "--tolerance",
            "0.05",
        ],
    ),
    (
        "cohort_daily",
        &[
            "--json",
            "cohort",
            "--builtin",
            "diamond-princess",
            "--mode",
            "daily",
            "--start-day",
            "17",
        ],
    ),
    (
        "cohort_cumulative",
        &[
            "--json",
            "cohort",
            "--builtin",
            "diamond-princess",
            "--mode",
            "cumulative",
            "--start-day",
            "17",
        ],
    ),
    (
        "simulate_first_positive",
        &[
            "--json",
            "simulate",
            "--kind",
            "first-positive",
            "--test",
            "biomedomics",
            "--prevalence",
            "0.5",
            "--k",
            "1",
            "--trials",
            "100000",
            "--seed",
            "42",
        ],
    ),
    (
        "simulate_partitioned",
        &[
            "--json",
            "simulate",
            "--kind",
            "all-negative",
            "--test",
            "hutchison",
            "--prevalence",
            "0.2",
            "--k",
            "2",
            "--trials",
            "100000",
            "--seed",
            "7",
            "--partitions",
            "4",
        ],
    ),
    (
        "simulate_screen",
        &[
            "--json",
            "simulate",
            "--kind",
            "screen",
            "--prevalence",
            "0.001",
            "--population",
            "100000",
            "--seed",
            "42",
        ],
    ),
    (
        "curves_fig1",
        &["--json", "curves", "--figure", "1", "--points", "5"],
    ),
    (
        "curves_fig4",
        &[
            "--json",
            "curves",
            "--figure",
            "4",
            "--test",
            "biomedomics",
            "--points",
            "11",
        ],
    ),
    (
        "curves_fig5",
        &["--json", "curves", "--figure", "5", "--points", "3"],
    ),
];
