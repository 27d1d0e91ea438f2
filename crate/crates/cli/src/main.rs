//! Command-line front end for the Hardy-constrained CHSH library.
//!
//! Six subcommands: `probe` evaluates the full construction at one
//! parameter point, `scan` tabulates the violation probability over a
//! (concurrence, theta) grid, `optimize` reports closed-form and numeric
//! optima, `compare` races constraint subsets against each other,
//! `geometry` emits figure data for the chord construction, and `verify`
//! runs the library's verification suites.
//!
//! Exit codes: 0 success, 1 configuration error, 2 degenerate geometry,
//! 3 verification failure.

mod compare;
mod geometry;
mod grid;
mod optimize;
mod probe;
mod render;
mod scan;
mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::ValueOrGrid;
use crate::render::CliError;

#[derive(Parser)]
#[command(
    name = "hardy-chsh",
    version,
    about = "Hardy-constrained CHSH on two-qubit states: scans, optima, figure data, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the construction at a single (concurrence, theta, phi).
    Probe(probe::ProbeArgs),
    /// Tabulate w over a grid, with the per-concurrence ridge.
    Scan(scan::ScanArgs),
    /// Closed-form and numeric optima per concurrence.
    Optimize(optimize::OptimizeArgs),
    /// Maximal CHSH value under each constraint subset.
    Compare(compare::CompareArgs),
    /// Ellipse-section figure data: samples and labelled points.
    Geometry(geometry::GeometryArgs),
    /// Run verification suites and emit a JSON report.
    Verify(verify::VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Destination and format flags shared by the data-emitting commands.
#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Rejects grid specs for commands that evaluate one point.
pub fn require_single(spec: &ValueOrGrid, what: &str) -> Result<f64, CliError> {
    spec.single()
        .ok_or_else(|| CliError::Config(format!("{what} takes a single value, not a grid")))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap exits with 2 on parse errors, but 2 is reserved for
            // degenerate geometry here; remap to the config code.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let result = match &cli.command {
        Command::Probe(args) => probe::run(args),
        Command::Scan(args) => scan::run(args),
        Command::Optimize(args) => optimize::run(args),
        Command::Compare(args) => compare::run(args),
        Command::Geometry(args) => geometry::run(args),
        Command::Verify(args) => verify::run(args),
    };
    if let Err(err) = result {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}
