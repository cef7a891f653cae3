//! Seeded experiment harness: generators, solver runs, ratio tables.
//!
//! Every subcommand accepts `--config FILE` with flat `key=value` lines;
//! explicit flags win over config values. Identical parameters and seeds
//! produce byte-identical output files.

mod config;
mod scenarios;

use anyhow::Result;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "onlab",
    about = "Online combinatorial algorithm experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Online graph colouring against an offline oracle.
    Colour(scenarios::ColourArgs),
    /// First-fit bin packing against the exact optimum.
    Pack(scenarios::PackArgs),
    /// Online chain covering of random interval orders.
    Chains(scenarios::ChainsArgs),
    /// Reduction checks: sW/incremental round trips and ratio preservation.
    Reduce(scenarios::ReduceArgs),
    /// Tree widening, separation checks and limiting paths.
    Wkl(scenarios::WklArgs),
    /// Certified piecewise-linear approximation of interval evaluators.
    Analysis(scenarios::AnalysisArgs),
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Colour(args) => scenarios::run_colour(args),
        Command::Pack(args) => scenarios::run_pack(args),
        Command::Chains(args) => scenarios::run_chains(args),
        Command::Reduce(args) => scenarios::run_reduce(args),
        Command::Wkl(args) => scenarios::run_wkl(args),
        Command::Analysis(args) => scenarios::run_analysis(args),
    }
}
