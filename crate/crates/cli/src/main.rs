//! `nlrpb`: build models, verify systems, convert between representations
//! and reproduce the closed-form tables.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check, 2 on invalid
//! parameters, 3 on I/O or parse errors.

mod commands;
mod document;
mod fsio;
mod tables;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Direction, Family, ModelArgs, Normalization};
use document::Format;
use tables::Table;

#[derive(Parser)]
#[command(
    name = "nlrpb",
    version,
    about = "Non-linear pseudo-boson and cryptohermitian toolkit"
)]
struct Cli {
    /// Absolute tolerance for every check (module defaults otherwise)
    #[arg(long, global = true, env = "NLRPB_TOL", value_parser = parse_tol)]
    tol: Option<f64>,

    /// Report format written to stdout
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a model and report its spectrum, metric and axiom checks
    Model {
        #[arg(value_enum)]
        family: Family,
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        /// Dimension of the Chebyshev model
        #[arg(long)]
        n: Option<usize>,
        /// Vector normalization (paper is available for Chebyshev N = 2, 3)
        #[arg(long, value_enum, default_value = "uniform")]
        normalization: Normalization,
        /// Write the model document here instead of embedding it in the report
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the full check suite on a model document, system or crypto pair
    Verify { path: PathBuf },
    /// Convert between a biorthonormal system and an (H, Θ) pair
    Convert {
        #[arg(value_enum)]
        direction: Direction,
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print closed-form values beside recomputed ones
    PaperTables {
        #[arg(value_enum)]
        which: Table,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// A computation failed (exit code 1).
    Math(anyhow::Error),
    /// Bad parameters (exit code 2).
    Invalid(anyhow::Error),
    /// Unreadable, unwritable or malformed files (exit code 3).
    Io(anyhow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Math(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            CliError::Math(e) | CliError::Invalid(e) | CliError::Io(e) => e,
        }
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("tolerance must be positive and finite, got {s}"))
    }
}

fn run(cli: Cli) -> Result<document::ReportDocument, CliError> {
    match cli.command {
        Command::Model {
            family,
            beta,
            delta,
            n,
            normalization,
            output,
        } => commands::model(
            ModelArgs {
                family,
                beta,
                delta,
                n,
                normalization,
                output,
            },
            cli.tol,
        ),
        Command::Verify { path } => commands::verify(&path, cli.tol),
        Command::Convert {
            direction,
            path,
            output,
        } => commands::convert(direction, &path, output.as_deref(), cli.tol),
        Command::PaperTables { which } => tables::paper_tables(which),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => match report.render(format) {
            Ok(text) => match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: cannot write report: {e}");
                    ExitCode::from(3)
                }
                _ => ExitCode::from(if report.pass { 0 } else { 1 }),
            },
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(3)
            }
        },
        Err(e) => {
            eprintln!("error: {:#}", e.error());
            ExitCode::from(e.exit_code())
        }
    }
}
