//! Command-line front end for `cocycle-core`.
//!
//! Every run writes into its own directory: the resolved `config.toml`, the
//! command's CSV/JSON artifacts and a `run.json` record with SHA-256
//! checksums of everything written. Exit codes: 0 success, 2 homotopy
//! obstruction, 3 numerical failure or tolerance breach, 4 configuration or
//! I/O error.

pub mod commands;
pub mod config;
pub mod error;
pub mod family;
pub mod output;
pub mod svg;

use clap::Parser;

use crate::commands::Outcome;
use crate::config::{Cli, Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::RunOutput;

/// Runs one command with a resolved configuration inside a dedicated thread
/// pool. Tolerance breaches become [`CliError::Numerical`] after all
/// artifacts and the run record have been written.
pub fn execute(command: Command, cfg: &RunConfig) -> CliResult<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let mut out = RunOutput::create(&cfg.out)?;
    out.write_text("config.toml", &cfg.to_toml())?;
    match pool.install(|| commands::dispatch(command, cfg, &mut out)) {
        Ok(outcome) if outcome.failures.is_empty() => {
            out.finish(cfg, "ok", None)?;
            Ok(outcome)
        }
        Ok(outcome) => {
            let message = outcome.failures.join("; ");
            out.finish(cfg, "failed", Some(message.clone()))?;
            Err(CliError::Numerical(format!("tolerance breached: {message}")))
        }
        Err(e) => {
            out.finish(cfg, "error", Some(e.to_string()))?;
            Err(e)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::resolve(cli.command, &cli.options).and_then(|cfg| {
        let outcome = execute(cli.command, &cfg)?;
        Ok((cfg, outcome))
    });
    match result {
        Ok((cfg, outcome)) => {
            println!("{}: {}", cli.command.name(), outcome.summary);
            println!("outputs in {}", cfg.out.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
