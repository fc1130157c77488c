//! `annokit`: selective annotation and prompt retrieval from the command line.
//!
//! Exit codes: 0 success, 1 configuration error, 2 data or I/O error,
//! 3 scorer or transport error.

mod commands;
mod config;

use std::error::Error as _;
use std::process::ExitCode;

use annokit::Error;
use clap::{Parser, Subcommand};

use commands::*;

#[derive(Debug, Parser)]
#[command(name = "annokit", version, about = "Selective annotation and prompt retrieval over embedding pools")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a pool and report whether it is valid.
    IngestValidate(ValidateArgs),
    /// Dump the kNN similarity graph as JSON adjacency lists.
    Graph(GraphArgs),
    /// Choose instances to annotate.
    Select(SelectArgs),
    /// Build prompts for queries from an annotated pool (JSONL out).
    Retrieve(RetrieveArgs),
    /// Run a confidence scorer over a pool and write a confidence table.
    Score(ScoreArgs),
    /// Diversity, representativeness and coverage of a selection.
    Metrics(MetricsArgs),
    /// Repeated subsample-and-select runs, optionally over budgets and methods.
    Trials(TrialsArgs),
    /// Write a seeded Gaussian-mixture pool.
    GenSynthetic(SyntheticArgs),
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 1,
        Error::Data(_) | Error::Io { .. } => 2,
        Error::Score { .. } => 3,
    }
}

fn run(cli: &Cli) -> annokit::Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::config("threads must be ≥ 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::config(e.to_string()))?;
    }
    match &cli.command {
        Command::IngestValidate(a) => ingest_validate(a),
        Command::Graph(a) => graph(a),
        Command::Select(a) => select(a),
        Command::Retrieve(a) => retrieve_cmd(a),
        Command::Score(a) => score(a),
        Command::Metrics(a) => metrics(a),
        Command::Trials(a) => trials(a),
        Command::GenSynthetic(a) => gen_synthetic(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut msg = format!("error: {e}");
            let mut source = e.source();
            // Transparent variants already print their source.
            if matches!(e, Error::Data(_)) {
                source = None;
            }
            while let Some(s) = source {
                if !msg.ends_with(&s.to_string()) {
                    msg.push_str(&format!(": {s}"));
                }
                source = s.source();
            }
            eprintln!("{msg}");
            ExitCode::from(exit_code(&e))
        }
    }
}
