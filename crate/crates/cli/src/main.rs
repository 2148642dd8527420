use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use listcolour_cli::{exit_code, render, run, Cli, HarnessError, EXIT_INPUT};

fn emit(cli: &Cli, text: &str) -> Result<(), HarnessError> {
    match &cli.global.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let code = exit_code(&outcome);
    let written = outcome.and_then(|out| render(&out, cli.global.format)).and_then(|text| emit(&cli, &text));
    match written {
        Ok(()) => ExitCode::from(code),
        Err(e) => {
            eprintln!("listcolour: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
