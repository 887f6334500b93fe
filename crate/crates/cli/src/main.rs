mod args;
mod commands;
mod csv;
mod error;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (text, output) = match &cli.command {
        Command::Gen(a) => (commands::gen(a)?, a.output.as_deref()),
        Command::Estimate(a) => (commands::estimate(a)?, a.output.as_deref()),
        Command::Cost(a) => (commands::cost(a)?, a.output.as_deref()),
        Command::Match(a) => (commands::matching(a)?, a.output.as_deref()),
        Command::Slice(a) => (commands::slice(a)?, a.output.as_deref()),
    };
    emit(&text, output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
