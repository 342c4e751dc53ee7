use std::io::Write;
use std::process::ExitCode;

use bosegas_cli::args::Cli;
use bosegas_cli::config::Command;
use bosegas_cli::{run, CliError};
use clap::Parser;

fn execute(cli: Cli) -> Result<(), CliError> {
    let config = cli.into_config()?;
    let report = run(&config)?;
    let text = report.render(config.output_format);
    match &config.output_path {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    if config.command == Command::Verify {
        let failed = report.notes.iter().find(|(k, _)| k == "failed").map(|(_, v)| v.parse().unwrap_or(1)).unwrap_or(0);
        if failed > 0 {
            return Err(CliError::VerificationFailed { failed, total: report.rows.len() });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
