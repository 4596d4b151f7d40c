//! Run a scenario file through the harness, the way the `ek` binary does.
//!
//! cargo run --release --example scenario_runner -- scenarios/energy_audit.toml [out-dir]

use std::path::PathBuf;

use ek_core::harness::{run_scenario, ScenarioConfig};

fn main() -> ek_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "scenarios/nls_conservation.toml".into());
    let mut cfg = ScenarioConfig::load(&path)?;
    cfg.out = args.next().map(PathBuf::from).or(cfg.out);

    let bundle = run_scenario(&cfg)?;
    print!("{}", bundle.render());
    for p in &bundle.outputs {
        println!("wrote {}", p.display());
    }
    if !bundle.passed() {
        std::process::exit(1);
    }
    Ok(())
}
