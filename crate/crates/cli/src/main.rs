//! `parity-engine`: command-line surface over the paired-comparison engine.
//!
//! Every subcommand writes its outputs plus one `manifest.json` into `--out`,
//! and reruns with identical manifest inputs produce byte-identical files.

mod cmd;
mod common;
mod manifest;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "parity-engine", version, about = "Market-implied win probabilities, Bayesian team-strength fits, and league parity metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test how well market-implied probabilities match observed outcomes.
    ValidateMarket(cmd::validate_market::Args),
    /// Fit the state-space strength model to one league and export draws.
    Fit(cmd::fit::Args),
    /// Compare two fitted draw sets by DIC on a common game set.
    Compare(cmd::compare::Args),
    /// Refit at every cut week of a season and predict the following week.
    Sequential(cmd::sequential::Args),
    /// Score stored predictions against game outcomes.
    Evaluate(cmd::evaluate::Args),
    /// Regular-season or postseason parity summaries from posterior draws.
    Parity(cmd::parity::Args),
    /// Generate a synthetic league with known parameters.
    Synth(cmd::synth::Args),
}

/// 0 ok, 2 parse, 3 validation, 10 convergence warning, 1 other.
fn exit_code(err: &anyhow::Error) -> u8 {
    use parity_core::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::Parse { .. } | E::Csv(_) | E::SchemaVersion(_) | E::Json(_)) => 2,
        Some(E::Io(_) | E::NonFiniteDensity(_)) => 1,
        Some(_) => 3,
        None => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::ValidateMarket(args) => cmd::validate_market::run(args),
        Command::Fit(args) => cmd::fit::run(args),
        Command::Compare(args) => cmd::compare::run(args),
        Command::Sequential(args) => cmd::sequential::run(args),
        Command::Evaluate(args) => cmd::evaluate::run(args),
        Command::Parity(args) => cmd::parity::run(args),
        Command::Synth(args) => cmd::synth::run(args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Ok(raw) = std::env::var("PARITY_ENGINE_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => log::warn!("ignoring PARITY_ENGINE_THREADS={raw}: not a positive integer"),
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
