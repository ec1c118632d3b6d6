use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod compare;
mod error;
mod evaluate;
mod files;
mod generate;
mod solve;
mod svg;

use error::CliError;
use files::Format;

/// Multi-robot harvest scheduling with battery swaps.
#[derive(Debug, Parser)]
#[command(name = "saba", version)]
pub struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Base random seed; run k of a solve uses seed + k.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads, used across independent runs only.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Output directory.
    #[arg(long, global = true, env = "SABA_OUT", default_value = "saba-out")]
    pub out: PathBuf,
    /// Format of tabular outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated instance to <out>/<name>.json.
    Generate(generate::GenerateArgs),
    /// Run the solver on an instance file.
    Solve(solve::SolveArgs),
    /// Compare labeled solve output directories.
    Compare(compare::CompareArgs),
    /// Evaluate a solution file; exits 0 only when it is feasible.
    Evaluate(evaluate::EvaluateArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => generate::run(&cli.global, a),
        Command::Solve(a) => solve::run(&cli.global, a),
        Command::Compare(a) => compare::run(&cli.global, a),
        Command::Evaluate(a) => evaluate::run(&cli.global, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Infeasible) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
