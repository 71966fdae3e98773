//! End-to-end runs of the binary over temp files.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rmatch"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rmatch-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gen_solve_verify_round_trip() {
    let family = tmp("family.json");
    let status = bin()
        .args([
            "gen",
            "--construction",
            "extremal-family",
            "--n",
            "9",
            "--k",
            "3",
        ])
        .arg("--out")
        .arg(&family)
        .status()
        .unwrap();
    assert!(status.success());

    let out = bin()
        .args(["solve", "--mode", "rainbow", "--budget", "5000000"])
        .arg("--in")
        .arg(&family)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("ExhaustedNone"));

    let graph = tmp("host.txt");
    assert!(bin()
        .args([
            "gen",
            "--construction",
            "scripth",
            "--n",
            "8",
            "--m",
            "2",
            "--k",
            "4"
        ])
        .arg("--out")
        .arg(&graph)
        .status()
        .unwrap()
        .success());
    let witness = tmp("witness.json");
    let out = bin()
        .args(["solve", "--mode", "perfect", "--budget", "5000000"])
        .arg("--in")
        .arg(&graph)
        .arg("--witness-out")
        .arg(&witness)
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("Found"));

    let out = bin()
        .args(["verify"])
        .arg("--in")
        .arg(&graph)
        .arg("--witness")
        .arg(&witness)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("Perfect"));
}

#[test]
fn lp_augment_emits_host_and_sidecar() {
    let graph = tmp("lp-host.txt");
    assert!(bin()
        .args([
            "gen",
            "--construction",
            "scripth",
            "--n",
            "6",
            "--m",
            "2",
            "--k",
            "3"
        ])
        .arg("--out")
        .arg(&graph)
        .status()
        .unwrap()
        .success());
    let aug = tmp("aug.txt");
    let out = bin()
        .args(["lp", "--problem", "matching", "--format", "json"])
        .arg("--in")
        .arg(&graph)
        .arg("--augment-out")
        .arg(&aug)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("duality_holds"));
    assert!(aug.exists());
    assert!(aug.with_extension("omega.json").exists());
}

#[test]
fn experiment_exit_code_reflects_hard_assertions() {
    let config = tmp("exp.json");
    std::fs::write(
        &config,
        r#"{"suite": "duality", "n_list": [6, 7], "k": 3, "trials": 4, "hard_assertions": ["all"]}"#,
    )
    .unwrap();
    let outdir = tmp("expdir");
    let status = bin()
        .args(["experiment"])
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&outdir)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(outdir.join("report.json").exists());
}

#[test]
fn pipeline_mode_writes_trace() {
    let family = tmp("pipe-family.json");
    assert!(bin()
        .args([
            "--seed",
            "4",
            "gen",
            "--construction",
            "random-family",
            "--n",
            "8",
            "--k",
            "4"
        ])
        .arg("--out")
        .arg(&family)
        .status()
        .unwrap()
        .success());
    let trace = tmp("trace.json");
    let out = bin()
        .args(["--seed", "4"])
        .arg("--trace-out")
        .arg(&trace)
        .args(["solve", "--mode", "pipeline", "--budget", "5000000"])
        .arg("--in")
        .arg(&family)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("Found"));
    let trace_text = std::fs::read_to_string(&trace).unwrap();
    assert!(trace_text.contains("dispatch"));
}
