//! The `simplex-kernels` command line.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 for an
//! invalid configuration (bad flags, parameters or output path), 3 for a
//! domain error such as a degree above its bound or a divergent series.

mod eval;
mod input;
mod pds;
mod sample;
mod verify;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::numkit::Flavor;

pub use eval::{EvalArgs, EvalKind, Quantity};
pub use pds::{PdsArgs, PdsTransform};
pub use sample::{SampleArgs, SampleTarget};
pub use verify::{VerifyArgs, VerifySuite};

/// Schema id carried by every JSON document the CLI writes.
pub const SCHEMA: &str = "simplex-kernels/report/v1";

#[derive(Debug, Parser)]
#[command(name = "simplex-kernels", version, about = "Orthogonal polynomial kernels on the simplex")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Dirichlet parameters as a comma list; rationals like `1/2` are allowed.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// `exact` (rational arithmetic) or `float`.
    #[arg(long, global = true, default_value = "exact", value_parser = parse_flavor)]
    pub flavor: Flavor,
    /// Highest degree kept in series and sequences.
    #[arg(long, global = true)]
    pub truncation: Option<u32>,
    /// Grid resolution for positivity scans.
    #[arg(long, global = true)]
    pub grid: Option<u32>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

fn parse_flavor(s: &str) -> Result<Flavor, String> {
    s.parse::<Flavor>().map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a kernel, xi or chi value.
    Eval(EvalArgs),
    /// Run an identity or Monte Carlo verification suite.
    Verify(VerifyArgs),
    /// Stream seeded samples as CSV.
    Sample(SampleArgs),
    /// Positive-definite sequence transforms and scans.
    Pds(PdsArgs),
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters.
    Config(String),
    /// A precondition failed during computation.
    Domain(crate::Error),
    Io(std::io::Error),
    /// `verify` ran and at least one check failed.
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Domain(_) => 3,
        }
    }

    pub(crate) fn config(e: impl fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Domain(e) => write!(f, "domain error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

/// Malformed inputs are configuration errors; anything else the library
/// raises is a domain error.
impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error::*;
        match e {
            InvalidParameter { .. } | DimensionMismatch { .. } | InvalidPmf(_) => CliError::Config(e.to_string()),
            _ => CliError::Domain(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Metadata embedded in every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T> {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub flavor: Flavor,
    pub truncation: Option<u32>,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: impl Into<String>, common: &Common, truncation: Option<u32>, body: T) -> Self {
        Envelope {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed: common.seed,
            flavor: common.flavor,
            truncation,
            body,
        }
    }
}

pub(crate) fn emit(common: &Common, text: &str) -> CliResult<()> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

pub(crate) fn emit_json<T: Serialize>(common: &Common, report: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.into()))?;
    text.push('\n');
    emit(common, &text)
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    let common = cli.common;
    match cli.command {
        Command::Eval(args) => eval::run(&common, &args),
        Command::Verify(args) => verify::run(&common, &args),
        Command::Sample(args) => sample::run(&common, &args),
        Command::Pds(args) => pds::run(&common, &args),
    }
}

/// Parses `std::env::args`, runs, reports errors on stderr and returns the
/// process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("simplex-kernels: {e}");
            e.exit_code()
        }
    }
}
