//! Command-line front end for `shcm-core`.

pub mod args;
pub mod commands;
pub mod output;

use args::{Cli, Command};
pub use commands::CliError;

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Table(a) => commands::table(a),
        Command::Convergence(a) => commands::convergence(a),
    }
}
