//! `hessbound` command-line front end.
//!
//! Exit codes: 0 on success, 2 on input errors (bad flags, unreadable or
//! malformed bodies, out-of-range parameters), 3 on numerical failure.
//! Input is validated completely before any file is written.

mod commands;
mod config;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use crate::config::{Cli, RunConfig};

/// The caller's input is unusable (exit code 2).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

/// A computation failed (exit code 3).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct NumericalError(pub String);

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<InputError>() {
            return EXIT_INPUT;
        }
        if let Some(e) = cause.downcast_ref::<hessbound::Error>() {
            return if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_NUMERICAL
            };
        }
    }
    EXIT_NUMERICAL
}

/// Caps the rayon pool at `HESSBOUND_THREADS` when set.
fn init_threads() -> Result<(), InputError> {
    let Ok(value) = std::env::var("HESSBOUND_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            InputError(format!(
                "HESSBOUND_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| InputError(format!("cannot configure {n} threads: {e}")))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    init_threads()?;
    let cfg = RunConfig::from_command(cli.command)?;
    let artifacts = commands::run(&cfg)?;
    artifacts.emit(cfg.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
