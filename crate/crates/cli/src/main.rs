//! `symchar` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget
//! exceeded. Errors go to stderr as one JSON object per line.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::Cli;

pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

fn exit_code(err: &symchar::Error) -> u8 {
    use symchar::Error::*;
    match err {
        BudgetExceeded { .. } => EXIT_BUDGET,
        NoUnitPivot { .. } | Io(_) | Json(_) | Image(_) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if !err.use_stderr() => {
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let msg = err.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", json!({ "error": "usage", "message": first }));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("{}", json!({ "error": "usage", "message": "--threads must be positive" }));
            return ExitCode::from(EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().expect("global pool set once");
    }
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(err) => {
            eprintln!("{}", json!({ "error": err.kind(), "message": err.to_string() }));
            ExitCode::from(exit_code(&err))
        }
    }
}
