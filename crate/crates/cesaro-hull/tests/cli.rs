//! End-to-end checks of the `cesaro-hull` binary: subcommands, exit codes,
//! written artifacts, and CLI-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_cesaro-hull")
}

fn regression_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/regression")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary should run")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn partition_subcommand_writes_report_and_exits_zero() {
    let out = tempfile::tempdir().unwrap();
    let config = regression_dir().join("atomic_mixed.json");
    let output = run(&[
        "partition",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("verdict: PASS"), "{stdout}");
    for file in [
        "report.json",
        "cesaro_trajectories.csv",
        "quantile_envelopes.csv",
    ] {
        assert!(out.path().join(file).exists(), "{file} missing");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("report.json")).unwrap())
            .unwrap();
    // the external certificate schema is pinned
    let cert = &report["body"]["certificate"];
    for key in [
        "atoms",
        "J_b",
        "J_u",
        "q",
        "K",
        "Q",
        "l1_bound",
        "checked_sup",
        "provenance",
        "seed",
    ] {
        assert!(!cert[key].is_null(), "certificate key {key} missing");
    }
    assert_eq!(cert["J_b"], serde_json::json!([1, 2]));
    assert_eq!(cert["J_u"], serde_json::json!([3]));
}

#[test]
fn slln_subcommand_runs_generator_configs() {
    let out = tempfile::tempdir().unwrap();
    let config = regression_dir().join("slln_exponential.json");
    let output = run(&[
        "slln",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    assert!(out.path().join("report.json").exists());
    assert!(out.path().join("trajectories.csv").exists());
}

#[test]
fn eps_grid_override_lands_in_the_config_echo() {
    let out = tempfile::tempdir().unwrap();
    let config = regression_dir().join("all_constant.json");
    let output = run(&[
        "partition",
        "--config",
        config.to_str().unwrap(),
        "--eps-grid",
        "0.25,0.05",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(
        report["config"]["tolerances"]["eps_grid"],
        serde_json::json!([0.25, 0.05])
    );
}

#[test]
fn oracle_subcommand_reports_decisions() {
    let dir = tempfile::tempdir().unwrap();
    // single full-mass atom growing past the grid: unbounded at every eps
    let config_text = r#"{
        "space": { "masses": [1.0] },
        "family": { "kind": "uniform",
            "rule": { "power": { "alpha": 1.0, "scale": 1.0 } },
            "bound": "unbounded", "atom_count": 1 },
        "window": { "kind": "horizon", "horizon": 2048 },
        "oracle": { "m_grid": { "lo": 0.5, "hi": 100.0, "points": 64 } },
        "seed": 4
    }"#;
    let path = dir.path().join("oracle.json");
    std::fs::write(&path, config_text).unwrap();
    let output = run(&["oracle", "--config", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("UnboundedOnGrid"), "{stdout}");
}

#[test]
fn verification_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // a persistent oscillation at strict tolerance never settles: the limit
    // classifier refuses, the three-set verdict is inconclusive, and an
    // inconclusive verdict is not a pass
    let config_text = r#"{
        "space": { "masses": [1.0] },
        "family": { "kind": "per_atom", "atoms": [
            { "rule": { "oscillation": { "level": 1.0, "wobble": 1.0 } },
              "bound": { "bounded": 2.0 } }
        ] },
        "window": { "kind": "horizon", "horizon": 256 },
        "tolerances": { "tol": 0.001 },
        "seed": 1
    }"#;
    let path = dir.path().join("undecided.json");
    std::fs::write(&path, config_text).unwrap();
    let output = run(&["partition", "--config", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 1, "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("Inconclusive"), "{stdout}");
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ \"seed\": 1, \"surprise\": true }").unwrap();
    let output = run(&["partition", "--config", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 2, "{output:?}");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("surprise"), "{stderr}");

    let missing = dir.path().join("missing.json");
    let output = run(&["slln", "--config", missing.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn suite_runs_the_shipped_regression_configs() {
    let output = run(&[
        "suite",
        "--config",
        regression_dir().to_str().unwrap(),
        "--jobs",
        "4",
    ]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert_eq!(stdout.matches(": PASS").count(), 10, "{stdout}");
}

#[test]
fn suite_continues_past_corrupted_configs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(
        regression_dir().join("all_constant.json"),
        dir.path().join("a_good.json"),
    )
    .unwrap();
    std::fs::write(dir.path().join("b_broken.json"), "{ nope").unwrap();
    let output = run(&["suite", "--config", dir.path().to_str().unwrap()]);
    assert_eq!(exit_code(&output), 1, "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("a_good.json: PASS"), "{stdout}");
    assert!(stdout.contains("b_broken.json: ERROR"), "{stdout}");
}

#[test]
fn empty_suite_warns_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["suite", "--config", dir.path().to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("no configs"), "{stderr}");
}

#[test]
fn identical_seeds_give_byte_identical_verdicts() {
    let out = tempfile::tempdir().unwrap();
    let run_once = || {
        let config = regression_dir().join("slln_antithetic.json");
        let output = run(&[
            "slln",
            "--config",
            config.to_str().unwrap(),
            "--seed",
            "77",
            "--out",
            out.path().to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&output), 0);
        let mut report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.path().join("report.json")).unwrap())
                .unwrap();
        report.as_object_mut().unwrap().remove("timings_ms");
        serde_json::to_string_pretty(&report).unwrap()
    };
    assert_eq!(run_once(), run_once());
}

#[test]
fn seed_override_changes_the_draws() {
    let final_mean = |seed: &str| {
        let out = tempfile::tempdir().unwrap();
        let config = regression_dir().join("slln_exponential.json");
        let output = run(&[
            "slln",
            "--config",
            config.to_str().unwrap(),
            "--seed",
            seed,
            "--out",
            out.path().to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&output), 0);
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.path().join("report.json")).unwrap())
                .unwrap();
        report["body"]["summary"]["final_cesaro_mean"]
            .as_f64()
            .unwrap()
    };
    assert_ne!(final_mean("1"), final_mean("2"));
}
