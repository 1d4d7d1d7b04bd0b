//! `holovolume` command-line tool.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 numeric consistency failure.

mod commands;
mod config;
mod svg;

use clap::Parser;
use config::{Cli, Command, RunConfig};
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<holovolume::Error> for CliError {
    fn from(e: holovolume::Error) -> Self {
        use holovolume::Error as E;
        match e {
            E::Argument(m) | E::Domain(m) => CliError::Usage(m),
            E::Consistency(m) => CliError::Numeric(m),
            E::Io(e) => CliError::Io(e.to_string()),
            E::Json(e) => CliError::Io(e.to_string()),
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("HOLOVOLUME_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "HOLOVOLUME_THREADS must be a positive integer, got '{v}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let cfg = RunConfig::from_cli(cli)?;
    match cfg.command {
        Command::Modes => commands::modes(&cfg),
        Command::Dynamics => commands::dynamics(&cfg),
        Command::Cycle => commands::cycle(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Capacity => commands::capacity(&cfg),
        Command::Verify => commands::verify(&cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
