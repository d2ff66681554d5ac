mod cli;
mod commands;
mod config;
mod error;
mod report;
mod suite;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use crate::cli::Cli;
use crate::error::CliError;
use crate::report::{emit_csv, emit_json, flatten, ExperimentReport, Timing};

/// Caps the rayon pool from NORTHCOTT_LAB_THREADS.
fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("NORTHCOTT_LAB_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("NORTHCOTT_LAB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Failure(e.to_string()))
}

fn real_main() -> Result<bool, CliError> {
    let argv = config::merge_config(std::env::args().collect())?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return Ok(true);
        }
        Err(e) => return Err(CliError::Usage(e.to_string().trim_end().to_string())),
    };
    configure_threads()?;
    let start = Instant::now();
    let outcome = commands::run(&cli.command, &cli.global)?;
    let echo = argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    let mut config = cli.command.config();
    config["subcommand"] = serde_json::json!(cli.command.name());
    config["tol"] = serde_json::json!(cli.global.tol);
    let mut report = ExperimentReport::new(echo, config, outcome.result, outcome.pass);
    if cli.global.timing {
        report.timing = Some(Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 });
    }
    let text = if cli.global.csv {
        emit_csv(&outcome.table.unwrap_or_else(|| flatten(&report.result)))
    } else {
        emit_json(&report)
    };
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(|e| CliError::Failure(e.to_string()))?;
    Ok(report.pass.unwrap_or(true))
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
