//! Command-line front end for `paraion-core`: JSON run configurations, CSV and
//! JSON outputs, and deterministic SVG plots.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

pub use cli::Cli;
pub use error::{CliError, CliResult, ExitCode};

use cli::Command;
use commands::Context;

pub fn run(cli: &Cli) -> CliResult<()> {
    let ctx = Context::from_cli(cli);
    match &cli.command {
        Command::Simulate => commands::simulate(&ctx).map(drop),
        Command::Verify(args) => commands::verify(&ctx, args).map(drop),
        Command::Prep(args) => commands::prep(&ctx, args).map(drop),
        Command::Fit(args) => commands::fit(&ctx, args).map(drop),
        Command::Plot(args) => commands::plot(&ctx, args).map(drop),
    }
}
