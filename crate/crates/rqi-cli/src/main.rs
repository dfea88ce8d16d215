//! Command-line surface: one subcommand per scenario, emitting curve tables
//! and verification reports to files.
//!
//! Exit codes: 0 success, 2 validation error, 3 verification failure.

mod run;

use std::process::ExitCode;

use clap::Parser;

use run::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
