//! Command-line front end for the `samspin` simulator.
//!
//! Parameter entry is layered: built-in defaults, then a flat key = value
//! configuration file (`--config`), then command-line flags. Results are
//! emitted as CSV (default) or JSON to stdout or `--output`.

pub mod cli;
pub mod config;
pub mod output;

use std::process::ExitCode;

use clap::Parser;

use config::CliError;

/// Parses arguments and runs one command, mapping errors to exit codes:
/// 0 success (and "adiabatic"), 1 validation error, 2 usage error.
pub fn run() -> ExitCode {
    let parsed = cli::Cli::parse();
    match cli::execute(parsed) {
        Ok(code) => code,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
