//! `spca`: seeded, config-driven experiments around the sparse PCA
//! estimators. Exit codes: 0 on success, 2 on parameter or usage errors,
//! 3 on numerical failure.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "spca",
    version,
    about = "Sparse principal component estimation experiments",
    after_help = "Outputs are deterministic: identical flags and seed produce \
                  byte-identical files. Relative --out paths are resolved against \
                  $SPCA_OUT_DIR when set."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    Estimate(commands::estimate::EstimateArgs),
    Rate(commands::rate::RateArgs),
    Clique(commands::clique::CliqueArgs),
    Audit(commands::audit::AuditArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => commands::estimate::run(args),
        Command::Rate(args) => commands::rate::run(args),
        Command::Clique(args) => commands::clique::run(args),
        Command::Audit(args) => commands::audit::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
