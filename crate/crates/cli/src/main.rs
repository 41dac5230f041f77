//! `cantor-evt`: evaluate, simulate, verify and emit figure data.
//!
//! Exit codes: 0 success, 1 domain or runtime error (including failed
//! invariants), 2 usage error.

mod args;
mod commands;
mod config;
mod figures;
mod output;
mod svg;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command};
use config::ConfigError;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] cantor_evt::Error),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0} invariant(s) failed")]
    Failed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(ConfigError::Syntax { .. } | ConfigError::UnknownKey { .. }) => 2,
            _ => 1,
        }
    }
}

fn run(argv: Vec<OsString>) -> Result<(), CliError> {
    let argv = config::merge(argv)?;
    let matches = Cli::command()
        .try_get_matches_from(&argv)
        .unwrap_or_else(|e| e.exit());
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    let meta = config::resolved(&matches);
    let out = cli.out.as_deref();
    let csv = match &cli.command {
        Command::Cdf(a) => commands::cdf(a, &meta)?,
        Command::Nu(a) => commands::nu_table(a, &meta)?,
        Command::Quantile(a) => commands::quantiles(a, &meta)?,
        Command::Simulate(a) => commands::simulate(a, cli.seed, &meta)?,
        Command::MaxLaw(a) => commands::max_law(a, cli.seed, &meta)?,
        Command::ExtremalIndex(a) => commands::extremal_index(a, cli.seed, &meta)?,
        Command::ExactLaw(a) => commands::exact_law(a, &meta)?,
        Command::Verify(a) => {
            let (csv, failed) = commands::verify(a, cli.seed, &meta)?;
            output::emit(out, csv.as_str())?;
            if failed > 0 {
                return Err(CliError::Failed(failed));
            }
            return Ok(());
        }
        Command::Figures(a) => {
            let artifacts = figures::build(a, cli.seed, &meta)?;
            let paths = figures::write(&a.out_dir, &artifacts)?;
            let listing: String = paths.iter().map(|p| format!("{}\n", p.display())).collect();
            output::emit(out, &listing)?;
            return Ok(());
        }
    };
    output::emit(out, csv.as_str())?;
    Ok(())
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
