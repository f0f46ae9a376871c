//! `bfly`: build, analyze and verify generalized butterfly permutations.

mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Exit status of a finished command.
pub enum Outcome {
    Ok,
    VerificationFailed,
}

/// Errors surfaced to the user, each with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Scale(String),
}

impl From<butterfly_bct::Error> for CliError {
    fn from(e: butterfly_bct::Error) -> Self {
        match e {
            butterfly_bct::Error::ScaleRefusal(msg) => CliError::Scale(msg),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("json error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| commands::run(&cli)) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Scale(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(3)
        }
    }
}
