//! Command-line front end: rescaled holonomy reports, Kerckhoff points,
//! cone-angle tables with doubled holonomy checks, and surface exports.
//!
//! Exit codes: 0 success, 1 I/O or schema failure, 2 configuration error,
//! 3 numerical-budget error, 4 failed threshold.

mod commands;
mod error;
mod output;
mod schema;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::CommonArgs;

#[derive(Debug, Parser)]
#[command(
    name = "halfpipe",
    version,
    about = "Transition from hyperbolic to anti-de Sitter structures through half-pipe geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rescaled holonomy families of the configured words and their limits.
    Transition(CommonArgs),
    /// Minimum of the sum of the lengths of the two multicurves.
    Kerckhoff(CommonArgs),
    /// Meridian cone angles (CSV) and doubled holonomy checks.
    Double(CommonArgs),
    /// Sampled bent surfaces with their bending lines.
    ExportSurface(CommonArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Transition(a) => commands::transition(a),
        Command::Kerckhoff(a) => commands::kerckhoff(a),
        Command::Double(a) => commands::double(a),
        Command::ExportSurface(a) => commands::export(a),
    };
    match result {
        Ok(()) => ExitCode::from(error::EXIT_OK),
        Err(e) => {
            eprintln!("halfpipe: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
