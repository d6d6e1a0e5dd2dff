//! Smoke tests driving the compiled binary end to end.

use std::fs;
use std::process::Command;

fn qrc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qrc"))
}

fn write_small_config(dir: &std::path::Path) -> std::path::PathBuf {
    let path = dir.join("small.conf");
    fs::write(
        &path,
        "\
n_qubits = 6
ensemble = 2
washout = 30
train_len = 120
test_len = 80
max_delay = 5
max_horizon = 3
esn_ensemble = 2
",
    )
    .unwrap();
    path
}

#[test]
fn stm_subcommand_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let out = dir.path().join("results");
    let status = qrc()
        .args(["stm", "--config"])
        .arg(&config)
        .args(["--seed", "9", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let csv = fs::read_to_string(out.join("stm.csv")).unwrap();
    assert!(csv.starts_with("sweep_param,sweep_value,metric,mean,stderr,n"));
    assert_eq!(csv.lines().count(), 1 + 6 + 1); // header + delays 0..=5 + capacity

    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("stm.meta.json")).unwrap()).unwrap();
    assert_eq!(sidecar["master_seed"], 9);
}

#[test]
fn trajectory_subcommand_exports_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj");
    let status = qrc()
        .args([
            "trajectory",
            "--signal",
            "cosine",
            "--cycles",
            "40",
            "--pairs",
            "1:2,3:4",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "cycle,z1,z2,z3,z4");
    assert_eq!(lines.count(), 40);
}

#[test]
fn unknown_config_keys_fail_loudly() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    fs::write(&bad, "feedbackweight = 2.0\n").unwrap();
    let output = qrc()
        .args(["stm", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unknown key"), "stderr: {stderr}");
}
