use std::process::ExitCode;

use clap::Parser;
use revol::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("revol: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
