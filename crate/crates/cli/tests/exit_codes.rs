use std::process::{Command, Output};

fn arctic(dir: &std::path::Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arctic"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn passing_run_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = arctic(dir.path(), &["verify", "--model", "staircase", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["command"], "verify");
    assert_eq!(report["model"], "staircase");
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let saved = std::fs::read(dir.path().join("out/verify-staircase.json")).unwrap();
    assert_eq!(saved, out.stdout);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "--model", "red", "--n", "3", "--k", "1"][..],
        &["oracle", "--model", "vsasm", "--n", "4"],
        &["envelope", "--model", "aztec", "--count", "2"],
        &["verify", "--model", "hexagon", "--n", "3"],
    ] {
        let out = arctic(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // At n = 64 the finite-size argmax is still far from the limit for some directions.
    let out = arctic(
        dir.path(),
        &["saddle", "--model", "staircase", "--n", "64", "--tol", "1e-6"],
    );
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().any(|c| c["pass"] == false));
}
