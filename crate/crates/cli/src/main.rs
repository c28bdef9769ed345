//! `allelic` — allele-based case-control association tests, closed-form
//! asymptotic power, and seeded Monte Carlo calibration studies.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 input-data error,
//! 3 infeasible-model error.

mod args;
mod commands;
mod config;
mod errors;
mod marker_io;
mod table_out;

use args::{Cli, Command};
use clap::error::ErrorKind;
use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap routes help/version to stdout and diagnostics to stderr.
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Assoc(a) => commands::assoc::run(a),
        Command::Power(a) => commands::power::run(a),
        Command::Type1(a) => commands::type1::run(a),
        Command::Simulate(a) => commands::simulate::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
