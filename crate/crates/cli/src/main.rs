mod artifact;
mod commands;
mod config;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::commands::Command;
use crate::config::{Overrides, RunConfig};
use crate::error::{CliError, CliResult};

/// Exact theta elements and anticyclotomic p-adic L-functions on the
/// Bruhat-Tits tree.
#[derive(Parser)]
#[command(name = "theta-forge", version)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

fn cap_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("THETA_FORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::new("Config", format!("THETA_FORGE_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::new("Config", e.to_string()))
}

fn run(cli: Cli) -> CliResult<commands::Outcome> {
    cap_threads()?;
    let config = RunConfig::resolve(&cli.overrides)?;
    commands::dispatch(&config, cli.command)
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", serde_json::to_string(e).expect("error objects serialize"));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => return fail(&CliError::new("Usage", e.to_string().trim_end())),
    };
    match run(cli) {
        Ok(out) => {
            // A closed pipe downstream is not an error of the run.
            let mut stdout = std::io::stdout().lock();
            let paths = out.artifacts.iter().map(|p| format!("artifact: {}", p.display()));
            for line in out.summary.iter().cloned().chain(paths) {
                if writeln!(stdout, "{line}").is_err() {
                    break;
                }
            }
            match &out.failure {
                Some(e) => fail(e),
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => fail(&e),
    }
}
