use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ek_core::harness::{besov_from_snapshot, run_with_threads, Pipeline, ScenarioConfig};

#[derive(Parser)]
#[command(name = "ek", version, about = "Euler-Korteweg energy-conservation laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Direct RK4 run of the Euler-Korteweg system.
    Simulate(Common),
    /// Split-step Schrödinger run sampled through the Madelung transform.
    Madelung(Common),
    /// Conservation drifts, weak-form residual and the mollified identity.
    EnergyAudit(Common),
    /// Commutator residuals over a ladder of mollification radii.
    CommutatorScan(Common),
    /// Structure function and regularity exponent of a field.
    Besov {
        #[arg(long, conflicts_with = "field")]
        config: Option<PathBuf>,
        /// Snapshot file; the table goes to `--out`.
        #[arg(long, required_unless_present = "config")]
        field: Option<PathBuf>,
        /// Which stored field of the snapshot: 0 = ρ, 1.. = momentum.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 3.0)]
        p: f64,
        /// Output directory with `--config`, table path with `--field`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Direct solver against the Schrödinger solver from the same data.
    CrossValidate(Common),
}

fn run(common: Common, pipeline: Pipeline) -> ek_core::Result<bool> {
    let mut cfg = ScenarioConfig::load(&common.config)?;
    if common.out.is_some() {
        cfg.out = common.out;
    }
    let threads = common.threads.unwrap_or_else(rayon::current_num_threads);
    let bundle = run_with_threads(&cfg, pipeline, threads)?;
    print!("{}", bundle.render());
    Ok(bundle.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(c) => run(c, Pipeline::Simulate),
        Command::Madelung(c) => run(c, Pipeline::Madelung),
        Command::EnergyAudit(c) => run(c, Pipeline::EnergyAudit),
        Command::CommutatorScan(c) => run(c, Pipeline::CommutatorScan),
        Command::CrossValidate(c) => run(c, Pipeline::CrossValidate),
        Command::Besov {
            config: Some(config),
            out,
            threads,
            ..
        } => run(Common { config, out, threads }, Pipeline::Besov),
        Command::Besov {
            field, index, p, out, ..
        } => {
            let field = field.expect("clap enforces --field without --config");
            let out = out.unwrap_or_else(|| PathBuf::from("table.csv"));
            besov_from_snapshot(&field, index, p, &out).map(|(_, e)| {
                println!(
                    "alpha {:.4}  r2 {:.4}  shifts {:.3e}..{:.3e}  seminorm {:.4e}",
                    e.alpha, e.r_squared, e.shift_range.0, e.shift_range.1, e.seminorm
                );
                true
            })
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("ek: {e}");
            ExitCode::from(2)
        }
    }
}
