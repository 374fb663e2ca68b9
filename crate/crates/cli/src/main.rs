//! Command-line entry point: generation, solving, trace transforms,
//! evaluation, FLOPs accounting, curve export, corpus ingestion, and
//! vocabulary export.
//!
//! Exit codes: 0 success, 1 domain failure (unsolved puzzle, failed
//! verification, invalid corpus), 2 usage error. Every run logs its
//! resolved configuration and seed to stderr for reproducibility.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "searchtrace", version, about = "Search-trace generation and evaluation for CountDown and Sudoku")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)] // dispatched once at startup
enum Command {
    /// Generate a dataset of problems and serialized search traces.
    Gen(commands::gen::GenArgs),
    /// Solve one puzzle and print its trace.
    Solve(commands::solve::SolveArgs),
    /// Transform or inspect trace text (prune, think, mistakes, report).
    Trace(commands::trace::TraceArgs),
    /// Score model generations against a problem file.
    Eval(commands::eval::EvalArgs),
    /// Exact inference-FLOPs accounting.
    Flops(commands::flops::FlopsArgs),
    /// Accuracy-vs-FLOPs curve export (CSV).
    Curve(commands::curve::CurveArgs),
    /// Validate and convert a Sudoku corpus file.
    Ingest(commands::ingest::IngestArgs),
    /// Emit a game vocabulary file.
    Vocab(commands::vocab::VocabArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => commands::gen::run(args),
        Command::Solve(args) => commands::solve::run(args),
        Command::Trace(args) => commands::trace::run(args),
        Command::Eval(args) => commands::eval::run(args),
        Command::Flops(args) => commands::flops::run(args),
        Command::Curve(args) => commands::curve::run(args),
        Command::Ingest(args) => commands::ingest::run(args),
        Command::Vocab(args) => commands::vocab::run(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        // Completed but the domain said no (unsolved, incorrect, invalid).
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
