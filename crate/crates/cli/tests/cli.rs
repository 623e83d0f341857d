//! Golden tests for the command-line contract: exit codes, schema headers,
//! and manifest digests.

use std::path::Path;
use std::process::Command;

use sha2::{Digest, Sha256};

fn engine() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parity-engine"))
}

fn write_demo_league(root: &Path) -> std::path::PathBuf {
    let config = root.join("truth.cfg");
    std::fs::write(&config, "league_id = golden\nteams = 6\ncities = 6\nseed = 21\n").unwrap();
    let out = root.join("synth");
    let status = engine()
        .args(["synth", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    out.join("games.csv")
}

fn first_line(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().next().unwrap_or_default().to_string()
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(
        &empty,
        "league,season,week,home_team,away_team,home_city,home_line,away_line,home_win,home_score,away_score\n",
    )
    .unwrap();
    let status = engine()
        .args(["validate-market", "--games"])
        .arg(&empty)
        .arg("--out")
        .arg(dir.path().join("out"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2), "header-only games file must exit 2");

    let bad_config = dir.path().join("bad.cfg");
    std::fs::write(&bad_config, "no_such_key = 1\n").unwrap();
    let status = engine()
        .args(["synth", "--config"])
        .arg(&bad_config)
        .arg("--out")
        .arg(dir.path().join("out2"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2), "unknown truth-config key must exit 2");
}

#[test]
fn validation_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let games = write_demo_league(dir.path());
    let status = engine()
        .args(["fit", "--games"])
        .arg(&games)
        .args(["--league", "absent", "--out"])
        .arg(dir.path().join("out"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3), "unknown league id must exit 3");

    let bad_truth = dir.path().join("bad_vig.cfg");
    std::fs::write(&bad_truth, "vig = 0.5\n").unwrap();
    let status = engine()
        .args(["synth", "--config"])
        .arg(&bad_truth)
        .arg("--out")
        .arg(dir.path().join("out2"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3), "out-of-range vig must exit 3");
}

#[test]
fn unconverged_fit_exits_10() {
    let dir = tempfile::tempdir().unwrap();
    let games = write_demo_league(dir.path());
    let out = dir.path().join("fit");
    let status = engine()
        .args(["fit", "--games"])
        .arg(&games)
        .args([
            "--league", "golden", "--chains", "2", "--iterations", "40", "--burn-in", "0",
            "--thin", "1", "--seed", "2", "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(
        status.code(),
        Some(10),
        "dispersed chains kept without burn-in must trip the convergence warning"
    );
    assert!(out.join("draws.csv").exists(), "outputs written despite the warning");
}

#[test]
fn emitted_csvs_declare_their_schema() {
    let dir = tempfile::tempdir().unwrap();
    let games = write_demo_league(dir.path());
    assert_eq!(first_line(&games), "#schema=games-v1");
    assert_eq!(
        first_line(&games.parent().unwrap().join("truth.csv")),
        "#schema=truth-v1"
    );

    let fit_out = dir.path().join("fit");
    let status = engine()
        .args(["fit", "--games"])
        .arg(&games)
        .args([
            "--league", "golden", "--chains", "2", "--iterations", "300", "--burn-in", "100",
            "--thin", "2", "--seed", "4", "--out",
        ])
        .arg(&fit_out)
        .status()
        .unwrap();
    assert!(matches!(status.code(), Some(0 | 10)));
    assert_eq!(first_line(&fit_out.join("draws.csv")), "#schema=draws-v1");
    assert_eq!(
        first_line(&fit_out.join("diagnostics.csv")),
        "#schema=diagnostics-v1"
    );
    assert_eq!(
        first_line(&fit_out.join("shrinkage.csv")),
        "#schema=slice-shrinkage-v1"
    );

    let vm_out = dir.path().join("vm");
    let status = engine()
        .args(["validate-market", "--games"])
        .arg(&games)
        .arg("--out")
        .arg(&vm_out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(first_line(&vm_out.join("report.csv")), "#schema=market-report-v1");
    assert_eq!(first_line(&vm_out.join("bins.csv")), "#schema=market-bins-v1");
}

#[test]
fn manifest_lists_outputs_and_digests_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let games = write_demo_league(dir.path());
    let out = dir.path().join("vm");
    let status = engine()
        .args(["validate-market", "--games"])
        .arg(&games)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "validate-market");
    let outputs: Vec<String> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    for name in &outputs {
        assert!(out.join(name).exists(), "declared output {name} must exist");
    }
    let mut on_disk: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n != "manifest.json")
        .collect();
    on_disk.sort();
    assert_eq!(outputs, on_disk, "manifest must list exactly the produced files");

    let recorded = manifest["inputs"][games.display().to_string()]
        .as_str()
        .unwrap()
        .to_string();
    let mut hasher = Sha256::new();
    hasher.update(std::fs::read(&games).unwrap());
    let expected: String = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    assert_eq!(recorded, expected, "input digest must match the file bytes");
}

#[test]
fn same_seed_fit_digests_match_and_seeds_differ() {
    let dir = tempfile::tempdir().unwrap();
    let games = write_demo_league(dir.path());
    let mut digests = Vec::new();
    for (name, seed) in [("f1", "9"), ("f2", "9"), ("f3", "10")] {
        let out = dir.path().join(name);
        let status = engine()
            .args(["fit", "--games"])
            .arg(&games)
            .args([
                "--league", "golden", "--chains", "2", "--iterations", "300", "--burn-in",
                "100", "--thin", "2", "--seed", seed, "--out",
            ])
            .arg(&out)
            .status()
            .unwrap();
        assert!(matches!(status.code(), Some(0 | 10)));
        let mut hasher = Sha256::new();
        hasher.update(std::fs::read(out.join("draws.csv")).unwrap());
        let digest: String = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        digests.push(digest);
    }
    assert_eq!(digests[0], digests[1], "same seed must reproduce the draws file");
    assert_ne!(digests[0], digests[2], "a different seed must change the draws");
}
