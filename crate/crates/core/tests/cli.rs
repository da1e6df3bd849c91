use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tdcentral"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["verify", "--help"])), 0);
}

#[test]
fn list_presets() {
    let out = run(&["list-presets"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "oscillator-lfi",
        "scaled-kepler",
        "binary",
        "yukawa",
        "lewis-leach",
    ] {
        assert!(text.contains(name), "{name} missing");
    }
    let out = run(&["list-presets", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|e| e["parameters"].is_object()));
}

#[test]
fn simulate_writes_trajectory_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("family_b_inline.json");
    let out = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,r,rdot,theta,h_accepted"));
    assert_eq!(lines.count(), 1001);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["drift.qfi_b"]["pass"], true);
    assert_eq!(report["drift.qfi_b"]["tolerance"], 1e-7);
}

#[test]
fn perturbed_system_fails_with_named_residuals() {
    let cfg = fixture("kepler_perturbed.json");
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--suite",
        "pde",
        "--json",
    ]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pde.R1"]["pass"], false);
    assert!(v["pde.R1"]["max_residual"].as_f64().unwrap() >= 1e-4);

    let cfg = fixture("family_b_mismatch.json");
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--suite",
        "noether",
        "--json",
    ]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["noether.killing"]["pass"], false);
    assert_eq!(v["noether.velocity"]["pass"], true);
}

#[test]
fn every_passing_fixture_verifies() {
    for name in [
        "kepler_circular.json",
        "generalized_kepler.json",
        "family_b_inline.json",
        "oscillator_lfi.json",
        "scaled_kepler.json",
        "yukawa.json",
        "interatomic.json",
        "similarity.json",
        "lewis_leach.json",
        "wavefunction.json",
    ] {
        let cfg = fixture(name);
        let out = run(&["verify", "--config", cfg.to_str().unwrap()]);
        assert_eq!(
            code(&out),
            0,
            "{name}: {}{}",
            String::from_utf8_lossy(&out.stdout),
            stderr(&out)
        );
    }
}

#[test]
fn config_errors_exit_two_and_name_the_key() {
    let out = run(&["verify", "--config", fixture("malformed.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("rdott"), "{}", stderr(&out));

    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"system": {"preset": "yukawa", "params": {"kk": 1}}}"#, "kk"),
        (
            r#"{"system": {"family_b": {"g1": "(poly 1", "F": "u"}}}"#,
            "family_b.g1",
        ),
        (
            r#"{"system": {"preset": "binary"}, "integrator": {"atol": 0}}"#,
            "atol",
        ),
        (
            r#"{"system": {"preset": "binary"}, "initial": {"r": 0}}"#,
            "initial.r",
        ),
        (r#"{"system": {"preset": "unheard-of"}}"#, "unheard-of"),
        (r#"[1, 2, 3]"#, "invalid config"),
        ("", "invalid config"),
    ];
    for (i, (text, key)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("c{i}.json"));
        std::fs::write(&path, text).unwrap();
        let out = run(&["simulate", "--config", path.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{text}: {}", stderr(&out));
        assert!(stderr(&out).contains(key), "{text}: {}", stderr(&out));
        assert!(!stderr(&out).contains("panicked"), "{text}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "everything"])), 2);
    assert_eq!(code(&run(&["verify", "--seed", "-3"])), 2);
    assert_eq!(code(&run(&["simulate"])), 2);
    assert_eq!(code(&run(&["verify", "--config", "/no/such/file.json"])), 2);
    assert_eq!(code(&run(&["wavefunction", "--hbar", "0"])), 2);
}

#[test]
fn same_seed_same_bytes() {
    let cfg = fixture("generalized_kepler.json");
    let args = [
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "42",
        "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let other = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "43",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&other.stdout).unwrap();
    assert_eq!(v["plan"]["seed"], 43);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn orbit_binary_and_wavefunction_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&[
        "orbit",
        "--config",
        fixture("scaled_kepler.json").to_str().unwrap(),
        "--out",
        d,
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let orbit = std::fs::read_to_string(dir.path().join("orbit.csv")).unwrap();
    assert!(orbit.starts_with("t,scaled_radius,theta\n"));

    let out = run(&[
        "binary",
        "--config",
        fixture("binary.json").to_str().unwrap(),
        "--out",
        d,
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let mass = std::fs::read_to_string(dir.path().join("mass.csv")).unwrap();
    assert!(mass.starts_with("t,mass,mass_law\n"));

    let out = run(&["wavefunction", "--a", "0", "--b", "0"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("r,theta,t,re,im,abs\n"));
    assert_eq!(text.lines().count(), 101);
}

#[test]
fn verify_mode_flags() {
    let out = run(&[
        "verify",
        "--suite",
        "schrodinger",
        "--a",
        "2",
        "--b",
        "5",
        "--hbar",
        "0.5",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = run(&["verify", "--suite", "schrodinger", "--a", "-2"]);
    assert_eq!(code(&out), 2);
}
