use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hdmac_cli::{run_file, Command, RunOptions};

/// Rate regions, frontiers and checks for the half-duplex multiple-access
/// channel with generalized feedback.
#[derive(Parser)]
#[command(name = "hdmac", version)]
struct Cli {
    command: Command,
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Search seed, replacing the scenario's.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of weight directions per frontier.
    #[arg(long, default_value_t = 17)]
    weights: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions {
        out: cli.out,
        seed: cli.seed,
        weights: cli.weights,
    };
    match run_file(cli.command, &cli.scenario, &opts) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
