//! `qcong`: expansions, congruence checks and valuation tables for level p
//! modular functions.
//!
//! Exit status is 0 when every check passes, 1 on a counterexample and 2 on a
//! usage or configuration error.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qcong_core::{Error, PrimeContext};

use crate::render::Format;

/// Smallest working precision used internally; output is still truncated to
/// the requested precision.
pub const MIN_WORKING_PRECISION: i64 = 16;

#[derive(Parser, Debug)]
#[command(
    name = "qcong",
    version,
    about = "Exact q-expansions and p-adic congruences at levels 2, 3, 5, 7"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Level: 2, 3, 5 or 7 (13 with --exploratory).
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u32,
    /// q-precision of expansions and base precision of checks.
    #[arg(long, global = true, env = "QCONG_PRECISION", default_value_t = 256)]
    pub precision: i64,
    /// Output format; scans default to csv, everything else to text.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all available).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Allow p = 13 for expansions and scans.
    #[arg(long, global = true)]
    pub exploratory: bool,
}

impl Global {
    pub fn ctx(&self) -> Result<PrimeContext, Error> {
        if self.exploratory {
            PrimeContext::exploratory(self.p)
        } else {
            PrimeContext::new(self.p)
        }
    }

    pub fn working_precision(&self) -> i64 {
        self.precision.max(MIN_WORKING_PRECISION)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a q-expansion.
    Expand(ExpandArgs),
    /// Run a verification.
    Verify(VerifyArgs),
    /// Print a table.
    Table(TableArgs),
    /// Emit exploratory valuation data.
    Scan(ScanArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct ExpandArgs {
    /// The Hauptmodul psi = q^-1 + ...
    #[arg(long)]
    pub psi: bool,
    /// phi = 1/psi = q + ...
    #[arg(long)]
    pub phi: bool,
    /// The basis element f_{0,m} with this pole order.
    #[arg(long, value_name = "M")]
    pub basis: Option<usize>,
    /// The j-invariant.
    #[arg(long)]
    pub j: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    Theorem2,
    Lehner,
    Modeq,
    Hrelation,
    Powersums,
    Closure,
    Cusp,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub target: VerifyTarget,
    #[arg(long, default_value_t = 12)]
    pub m_max: usize,
    #[arg(long, default_value_t = 3)]
    pub d_max: u32,
    /// Largest n checked; without it every n within precision is checked.
    #[arg(long)]
    pub n_max: Option<i64>,
    /// Pole order for the lehner target.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 4)]
    pub deg_max: usize,
    /// Point in the upper half-plane, written a+bi.
    #[arg(long, default_value = "0+1i")]
    pub tau: String,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Valuations,
    Bj,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    pub which: TableKind,
    /// Pole orders m, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,3,5,7")]
    pub rows: Vec<usize>,
    /// Coefficient indices n, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10,12")]
    pub cols: Vec<i64>,
    /// Append the valuations of the coefficients of j.
    #[arg(long)]
    pub with_j: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    AlphaGtBeta,
    PhiPowers,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    pub which: ScanKind,
    #[arg(long, default_value_t = 8)]
    pub m_max: usize,
    #[arg(long, default_value_t = 32)]
    pub n_max: i64,
    #[arg(long, default_value_t = 3)]
    pub pow_max: usize,
    #[arg(long, default_value_t = 2)]
    pub d_max: u32,
}

/// Why a run stopped early.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Internal(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::UnsupportedPrime(_) | Error::ExploratoryPrime(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Internal(other.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Expand(a) => commands::expand(&cli.global, a),
        Command::Verify(a) => commands::verify(&cli.global, a),
        Command::Table(a) => commands::table(&cli.global, a),
        Command::Scan(a) => commands::scan(&cli.global, a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
