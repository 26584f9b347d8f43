//! The `rangefreq` command-line tool: build index files from raw data, query
//! them, check them against brute-force answers and benchmark them.
//!
//! Every command writes JSON lines to the given writer and returns the
//! process exit code: 0 on success, 1 when verification finds a mismatch,
//! 2 on usage or I/O errors.

pub mod bench;
pub mod build;
pub mod input;
pub mod query;
pub mod verify;

use std::fmt;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use bench::{BenchArgs, BenchReport};
pub use build::BuildArgs;
pub use query::QueryArgs;
pub use verify::VerifyArgs;

#[derive(Debug, Parser)]
#[command(name = "rangefreq", version, about = "Frequency queries over integer sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read a sequence and write an index file.
    Build(BuildArgs),
    /// Answer one query against an index file.
    Query(QueryArgs),
    /// Compare an index file with brute-force answers on random queries.
    Verify(VerifyArgs),
    /// Time random query workloads and report index sizes.
    Bench(BenchArgs),
}

/// Errors that end a command with exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Index(rangefreq::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
            CliError::Index(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<rangefreq::Error> for CliError {
    fn from(e: rangefreq::Error) -> Self {
        match e {
            rangefreq::Error::Io(e) => CliError::Io(e.to_string()),
            e @ (rangefreq::Error::InvalidRange { .. }
            | rangefreq::Error::OutOfBounds { .. }
            | rangefreq::Error::InvalidThreshold(_)
            | rangefreq::Error::Validation(_)) => CliError::Usage(e.to_string()),
            e => CliError::Index(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub(crate) fn emit(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), CliError> {
    let line = serde_json::to_string(value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(())
}

/// Runs a parsed command, writing results to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Build(a) => build::run(&a, out),
        Command::Query(a) => query::run(&a, out),
        Command::Verify(a) => verify::run(&a, out, err),
        Command::Bench(a) => bench::run(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "rangefreq: {e}");
            2
        }
    }
}
