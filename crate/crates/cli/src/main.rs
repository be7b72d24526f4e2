use std::process::ExitCode;

use clap::Parser;
use shcm_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match shcm_cli::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
