use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ek(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ek")).args(args).output().unwrap()
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
        .display()
        .to_string()
}

fn text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr)
}

#[test]
fn simulate_then_besov_on_a_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("short.toml");
    let body = fs::read_to_string(scenario("ek_direct.toml"))
        .unwrap()
        .replace("t_end = 0.5", "t_end = 0.01")
        .replace("sample_every = 50", "sample_every = 5")
        .replace("snapshots = false", "");
    fs::write(&cfg, body).unwrap();
    let out_dir = dir.path().join("run");
    let o = ek(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--threads",
        "1",
    ]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(text(&o).contains("PASS"));
    assert!(out_dir.join("energy.csv").exists());

    let table = dir.path().join("table.csv");
    let snap = out_dir.join("state_000000.ekf");
    let o = ek(&[
        "besov",
        "--field",
        snap.to_str().unwrap(),
        "--p",
        "3",
        "--out",
        table.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(text(&o).starts_with("alpha"));
    let csv = fs::read_to_string(&table).unwrap();
    assert_eq!(csv.lines().next(), Some("shift,increment_norm"));
    assert_eq!(csv.lines().count(), 1 + 8);
    assert!(dir.path().join("besov.json").exists());
}

#[test]
fn invalid_config_lists_every_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(
        &cfg,
        "pipeline = \"simulate\"\n[grid]\nn = 6\n[capillarity]\ntype = \"constant\"\nkappa0 = 0.0\n\
         [initial]\ntype = \"constant\"\nrho = 1.0\n[time]\nt_end = 1.0\n",
    )
    .unwrap();
    let o = ek(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let msg = text(&o);
    assert!(msg.contains("grid.n") && msg.contains("capillarity"), "{msg}");
}

#[test]
fn missing_config_is_an_error() {
    let o = ek(&["energy-audit", "--config", "/nonexistent/cfg.toml"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ek(&["besov"]);
    assert!(!o.status.success());
}

#[test]
fn failed_assertion_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.toml");
    let body = fs::read_to_string(scenario("ek_direct.toml"))
        .unwrap()
        .replace("t_end = 0.5", "t_end = 0.02")
        .replace("sample_every = 50", "sample_every = 5")
        .replace("energy_drift = 1e-7", "energy_drift = 1e-30");
    fs::write(&cfg, body).unwrap();
    let o = ek(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", text(&o));
    assert!(text(&o).contains("FAIL"));
}
