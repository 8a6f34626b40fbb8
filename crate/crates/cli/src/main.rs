use std::process::ExitCode;

use clap::Parser;
use qchan_cli::{run, Cli, Outcome, EXIT_VALIDATION_FAILED};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::ValidationFailed) => {
            eprintln!("qchan: validation failed");
            ExitCode::from(EXIT_VALIDATION_FAILED)
        }
        Err(e) => {
            eprintln!("qchan: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
