//! `shearchaos`: command-line access to the exponents, the critical curve,
//! sweeps and the simulation-based estimators.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use shearchaos::Error;

/// 0 success, 1 invalid input, 2 numerical failure, 3 I/O failure.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::DegenerateNoise { .. } => 1,
        Error::NonConvergence(_)
        | Error::BracketFailure { .. }
        | Error::NonFiniteState(_)
        | Error::SingularDiscretization(_) => 2,
        Error::Io(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.kind());
            ExitCode::from(exit_code(&e))
        }
    }
}
