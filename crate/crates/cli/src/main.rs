//! `chainring`: ring descriptions, ideal records, verification sweeps and
//! ideal tables for codes over `F_q[u]/<u^t>`.

mod commands;
mod ring_args;

use clap::{Parser, Subcommand, ValueEnum};
use ring_args::RingArgs;
use std::process::ExitCode;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] chainring_core::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "chainring",
    version,
    about = "Ideals of R^t[x]/<x^{n p^s} - delta> and their classification"
)]
pub struct Cli {
    /// Largest ring size enumerated by the oracle.
    #[arg(long, global = true, env = "CHAINRING_CAP")]
    pub cap: Option<u128>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe a ring: nilpotency data and the chain verdict.
    Ring {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Span generators and report torsion, size and type.
    Ideal {
        #[command(flatten)]
        ring: RingArgs,
        /// Generator in the text grammar; repeatable.
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
        /// Generators as a JSON list of coordinate lists (field element indices).
        #[arg(long)]
        gens_json: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the oracle census over a parameter grid.
    Verify(commands::GridArgs),
    /// Every ideal of a ring with its type parameters, torsions and size.
    Table {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// The CRT splitting of a constacyclic ring with n = 2 or 3.
    Split {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

/// Output cut short by a closed pipe (`| head`) is not an error.
fn is_broken_pipe(e: &CliError) -> bool {
    let kind = match e {
        CliError::Io(e) => Some(e.kind()),
        CliError::Json(e) => e.io_error_kind(),
        _ => None,
    };
    kind == Some(std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = cli.cap.unwrap_or(chainring_core::oracle::DEFAULT_CAP);
    let mut out = std::io::stdout().lock();
    let result = match &cli.command {
        Command::Ring { ring, format } => commands::ring(&mut out, ring, *format),
        Command::Ideal {
            ring,
            gens,
            gens_json,
            format,
        } => commands::ideal(&mut out, ring, gens, gens_json.as_deref(), *format),
        Command::Verify(grid) => commands::verify(&mut out, grid, cap),
        Command::Table { ring, format } => commands::table(&mut out, ring, *format, cap),
        Command::Split { ring, format } => commands::split(&mut out, ring, *format),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
