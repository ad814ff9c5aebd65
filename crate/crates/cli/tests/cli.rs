mod common;

use std::io::Write;
use std::process::{Command, Stdio};

use common::{tests_dir, tropatt, GOLDEN};
use tropatt::io::{parse_margins, parse_values, values_to_json};
use tropatt::{Matrix, Values};

fn code(args: &[&str]) -> i32 {
    tropatt(args).status.code().unwrap()
}

fn stderr_of(args: &[&str]) -> String {
    String::from_utf8(tropatt(args).stderr).unwrap()
}

#[test]
fn golden_outputs_match() {
    for (name, args) in GOLDEN {
        let out = tropatt(args);
        assert!(
            out.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let golden = std::fs::read(common::golden_path(name)).unwrap();
        assert_eq!(out.stdout, golden, "{name}");
    }
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["tropatt", "demo", "fig2", "--format", "json"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let rc = tropatt_cli::run(args, &mut std::io::empty(), &mut out, &mut err);
    assert_eq!(rc, 0);
    assert!(err.is_empty());
    assert_eq!(out, tropatt(&args[1..]).stdout);
}

#[test]
fn help_and_version_exit_zero() {
    let out = tropatt(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("sweep"));
    assert_eq!(code(&["--version"]), 0);
}

#[test]
fn usage_errors_exit_one_with_single_line() {
    for args in [
        &[][..],
        &["frobnicate"],
        &["attend", "-m", "fixtures/scores.json"],
        &[
            "attend",
            "-m",
            "fixtures/scores.json",
            "-v",
            "fixtures/values.json",
            "-b",
            "-1",
        ],
        &[
            "sweep",
            "-m",
            "fixtures/scores.json",
            "-v",
            "fixtures/values.json",
            "--betas",
            "10,1",
        ],
        &[
            "path",
            "-m",
            "fixtures/fig2_matrix.json",
            "-g",
            "fixtures/fig2_graph.json",
            "-L",
            "1",
            "-t",
            "0",
        ],
    ] {
        assert_eq!(code(args), 1, "{args:?}");
        let err = stderr_of(args);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("tropatt: "), "{err}");
    }
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let wrong = dir.path().join("wrong.json");
    std::fs::write(&wrong, r#"{"rows": 2, "cols": 2, "entries": [[1, 2]]}"#).unwrap();
    for m in [
        bad.to_str().unwrap(),
        wrong.to_str().unwrap(),
        "fixtures/missing.json",
    ] {
        let args = ["tropical", "-m", m, "-v", "fixtures/values.json"];
        assert_eq!(code(&args), 2, "{m}");
        assert_eq!(stderr_of(&args).lines().count(), 1);
    }
}

#[test]
fn domain_errors_exit_three() {
    // Shape mismatch, zero power, all-bottom row, unreachable target.
    for args in [
        &[
            "tropical",
            "-m",
            "fixtures/scores.json",
            "-v",
            "fixtures/values4.json",
        ][..],
        &["power", "-m", "fixtures/scores.json", "-L", "0"],
        &[
            "attend",
            "-m",
            "fixtures/fig2_matrix.json",
            "-v",
            "fixtures/values4.json",
            "--hard",
        ],
        &[
            "path",
            "-m",
            "fixtures/fig2_matrix.json",
            "--source",
            "3",
            "-L",
            "1",
            "-t",
            "0",
        ],
    ] {
        assert_eq!(code(args), 3, "{args:?}");
        assert_eq!(stderr_of(args).lines().count(), 1);
    }
}

#[test]
fn reads_stdin_for_dash() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tropatt"))
        .args(["tropical", "-m", "fixtures/scores.json", "-v", "-"])
        .current_dir(tests_dir())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let values = std::fs::read(tests_dir().join("fixtures/values.json")).unwrap();
    child.stdin.take().unwrap().write_all(&values).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        out.stdout,
        std::fs::read(common::golden_path("tropical.json")).unwrap()
    );
}

#[test]
fn identity_matrix_echoes_values() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("id.json");
    let v = dir.path().join("v.json");
    std::fs::write(
        &a,
        tropatt::io::matrix_to_json(&Matrix::identity(3).unwrap()),
    )
    .unwrap();
    let values = Values::from_extended(&[1.5, f64::NEG_INFINITY, -2.0]).unwrap();
    std::fs::write(&v, values_to_json(&values)).unwrap();
    let out = tropatt(&[
        "tropical",
        "-m",
        a.to_str().unwrap(),
        "-v",
        v.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        parse_values(std::str::from_utf8(&out.stdout).unwrap()).unwrap(),
        values
    );
}

#[test]
fn epsilon_tie_flag_beats_environment() {
    let boundary = |out: std::process::Output| -> Vec<bool> {
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        parse_margins(std::str::from_utf8(&out.stdout).unwrap())
            .unwrap()
            .iter()
            .map(|r| r.on_boundary)
            .collect()
    };
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_tropatt"));
        cmd.args(["margins", "-m", "fixtures/scores.json"])
            .current_dir(tests_dir());
        if let Some(f) = flag {
            cmd.args(["--epsilon-tie", f]);
        }
        match env {
            Some(e) => cmd.env(tropatt_cli::EPSILON_TIE_ENV, e),
            None => cmd.env_remove(tropatt_cli::EPSILON_TIE_ENV),
        };
        cmd.output().unwrap()
    };
    // Margins in the fixture are 2, 1 and 0.
    assert_eq!(boundary(run(None, None)), [false, false, true]);
    assert_eq!(boundary(run(Some("1.5"), None)), [false, true, true]);
    assert_eq!(boundary(run(Some("1.5"), Some("0"))), [false, false, true]);
    assert_eq!(run(Some("abc"), None).status.code(), Some(1));
}
