use std::process::ExitCode;

use clap::Parser;
use stepscatter_cli::commands;
use stepscatter_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stepscatter: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
