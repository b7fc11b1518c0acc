use std::process::Command;

fn stamr() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stamr"))
}

#[test]
fn centerline_run_writes_csv_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let out = stamr()
        .args([
            "--case",
            "dambreak_1d",
            "--mode=amr",
            "--out-centerline",
            "--end-time",
            "0.05",
            "--no-fields",
        ])
        .env("STAMR_OUT_ROOT", tmp.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dir = tmp.path().join("dambreak_1d-amr");
    let csv = std::fs::read_to_string(dir.join("centerline_001.csv")).unwrap();
    assert!(csv.starts_with("x,h,hU,Z\n"));
    assert!(csv.lines().count() > 50);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(v["mode"], "amr");
    assert!(!dir.join("initial.vtk").exists());
}

#[test]
fn speedup_field_after_uniform_run() {
    let tmp = tempfile::tempdir().unwrap();
    for mode in ["uniform", "stamr"] {
        let st = stamr()
            .args(["--case", "dambreak_1d", "--end-time", "0.02", "--no-fields"])
            .arg(format!("--mode={mode}"))
            .arg("--out-dir")
            .arg(tmp.path())
            .status()
            .unwrap();
        assert!(st.success());
    }
    let v: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("dambreak_1d-stamr/summary.json")).unwrap(),
    )
    .unwrap();
    assert!(v["speedup_vs_uniform"].as_f64().unwrap() > 0.0);
}

#[test]
fn bad_inputs_fail_with_diagnostic() {
    let out = stamr().args(["--case", "nope"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown case"));
    let tmp = tempfile::tempdir().unwrap();
    let out = stamr()
        .args(["--case", "dambreak_1d", "--set", "threshold=abc"])
        .arg("--out-dir")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("threshold"));
}
