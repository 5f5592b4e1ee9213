//! `polymer`: command-line front end for the Brownian polymer library.
//!
//! Exit status is 0 on success, 2 when a validation verdict fails and 1 on a
//! usage or configuration error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod output;
mod validate;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{expand_config, Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] brownian_polymer::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("POLYMER_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "POLYMER_THREADS={raw}: expected a non-negative integer"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("POLYMER_THREADS={raw}: {e}")))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Status, CliError> {
    init_threads()?;
    let p = cli.command.params();
    let to_file = p.out.is_some();
    let (table, status) = match &cli.command {
        Command::FreeEnergy(p) => commands::free_energy_cmd(p, to_file)?,
        Command::Polymer(p) => commands::polymer_cmd(p, to_file)?,
        Command::Lpp(p) => commands::lpp_cmd(p, to_file)?,
        Command::Queue(p) => commands::queue_cmd(p, to_file)?,
        Command::Gue(p) => commands::gue_cmd(p, to_file)?,
        Command::Validate(p) => commands::validate_cmd(p, to_file)?,
    };
    table.write(p.out.as_deref(), p.format)?;
    Ok(status)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv = match expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
