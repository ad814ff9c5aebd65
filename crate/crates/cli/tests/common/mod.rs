//! Golden CLI cases shared by the acceptance suite and the CLI tests.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// `(golden file, arguments)`; paths are relative to `tests/`.
pub const GOLDEN: &[(&str, &[&str])] = &[
    (
        "score.json",
        &["score", "--embeddings", "fixtures/embeddings.json"],
    ),
    (
        "attend_beta2.json",
        &[
            "attend",
            "-m",
            "fixtures/scores.json",
            "-v",
            "fixtures/values.json",
            "-b",
            "2",
        ],
    ),
    (
        "attend_hard.json",
        &[
            "attend",
            "-m",
            "fixtures/scores.json",
            "-v",
            "fixtures/values.json",
            "--hard",
        ],
    ),
    (
        "attend_log_space.json",
        &[
            "attend",
            "-m",
            "fixtures/scores.json",
            "-v",
            "fixtures/values.json",
            "-b",
            "10",
            "--log-space",
        ],
    ),
    (
        "tropical.json",
        &[
            "tropical",
            "-m",
            "fixtures/scores.json",
            "-v",
            "fixtures/values.json",
        ],
    ),
    (
        "tropical_fig2.json",
        &[
            "tropical",
            "-m",
            "fixtures/fig2_matrix.json",
            "-v",
            "fixtures/values4.json",
        ],
    ),
    (
        "power_fig2.json",
        &["power", "-m", "fixtures/fig2_matrix.json", "-L", "2"],
    ),
    (
        "path_fig2.json",
        &[
            "path",
            "-g",
            "fixtures/fig2_graph.json",
            "--source",
            "0",
            "-L",
            "2",
            "-t",
            "3",
            "--allow-stay",
        ],
    ),
    (
        "path_fig2.dot",
        &[
            "path",
            "-g",
            "fixtures/fig2_graph.json",
            "--source",
            "0",
            "-L",
            "2",
            "-t",
            "3",
            "--format",
            "dot",
        ],
    ),
    (
        "sweep.csv",
        &[
            "sweep",
            "-m",
            "fixtures/scores.json",
            "-v",
            "fixtures/values.json",
            "--betas",
            "1,10,100,1000",
        ],
    ),
    (
        "sweep.json",
        &[
            "sweep",
            "-m",
            "fixtures/scores.json",
            "-v",
            "fixtures/values.json",
            "--beta-min",
            "0.1",
            "--beta-max",
            "1000",
            "--steps",
            "5",
            "--log-spaced",
            "--format",
            "json",
        ],
    ),
    ("margins.json", &["margins", "-m", "fixtures/scores.json"]),
    (
        "check.json",
        &[
            "check",
            "-m",
            "fixtures/scores.json",
            "-v",
            "fixtures/values.json",
        ],
    ),
    ("demo_fig2.txt", &["demo", "fig2"]),
    ("demo_fig2.json", &["demo", "fig2", "--format", "json"]),
    ("demo_fig2.dot", &["demo", "fig2", "--format", "dot"]),
];

pub fn tests_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

/// Runs the built binary from `tests/` with a clean tie-tolerance environment.
pub fn tropatt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropatt"))
        .args(args)
        .current_dir(tests_dir())
        .env_remove("TROPATT_EPSILON_TIE")
        .output()
        .expect("spawn tropatt")
}

pub fn golden_path(name: &str) -> PathBuf {
    tests_dir().join("golden").join(name)
}
