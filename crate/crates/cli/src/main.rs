use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use ordinal_tir_cli::args::Cli;
use ordinal_tir_cli::{run, CliError, JOBS_ENV};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or_default();
            let text = first.strip_prefix("error: ").unwrap_or(first).to_string();
            eprintln!("{}", CliError::Usage(text));
            return ExitCode::from(2);
        }
    };
    let env_jobs = std::env::var(JOBS_ENV).ok();
    match run(&cli, env_jobs.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
