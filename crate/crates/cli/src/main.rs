//! `randlat`: seeded random-lattice experiments from the command line.
//!
//! Subcommands: `sample`, `shortvec`, `exact-moments`, `verify`, `simulate`,
//! `correlations`, `compare`. Progress goes to stderr, stdout stays
//! machine-readable. Exit codes: 0 ok, 1 verification failure, 2 usage error,
//! 3 budget/resource error.

mod commands;
mod output;
mod parse;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

use randlat::Error as CoreError;

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

/// Environment variable consulted for the default seed when --seed is absent.
pub const SEED_ENV: &str = "RANDLAT_SEED";

#[derive(Debug)]
pub enum AppError {
    /// Bad flags or malformed input files.
    Usage(String),
    /// An exact identity or statistical check failed.
    Verify(String),
    /// Node budget or census completeness exhausted.
    Budget(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => EXIT_USAGE,
            AppError::Verify(_) => EXIT_VERIFY,
            AppError::Budget(_) => EXIT_BUDGET,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Verify(m) | AppError::Budget(m) => m,
        }
    }
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BudgetExceeded { .. }
            | CoreError::CensusIncomplete { .. }
            | CoreError::PrecisionLoss(_) => AppError::Budget(e.to_string()),
            _ => AppError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Usage(e.to_string())
    }
}

pub type AppResult<T> = Result<T, AppError>;

#[derive(Parser)]
#[command(name = "randlat", version, about = "Seeded random-lattice experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Lattice,
    Poisson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Matrix,
    Partition,
    Both,
    Pair,
}

#[derive(Args, Debug)]
pub struct CommonOut {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Suppress the timestamp field for byte-identical reruns.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value = "lattice")]
    pub kind: Kind,
    /// Lattice dimension n >= 2 (lattice kind).
    #[arg(long)]
    pub dim: Option<u32>,
    /// Goldstein-Mayer prime; default derives from the seed.
    #[arg(long)]
    pub prime: Option<String>,
    /// RNG seed; falls back to $RANDLAT_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "1")]
    pub trials: u64,
    /// Poisson horizon (poisson kind).
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Emit one JSON line per trial (basis or point list).
    #[arg(long)]
    pub emit_raw: bool,
    #[command(flatten)]
    pub out: CommonOut,
}

#[derive(Args, Debug)]
pub struct ShortvecArgs {
    /// JSON basis file {"dim", "rows", "rawDet"}.
    #[arg(long)]
    pub basis: std::path::PathBuf,
    /// Complete census of all pairs with ball volume <= t.
    #[arg(long, conflicts_with = "first")]
    pub volume_max: Option<f64>,
    /// First N pairs by ball volume.
    #[arg(long)]
    pub first: Option<usize>,
    /// Enumeration node budget.
    #[arg(long, default_value = "1000000000")]
    pub node_budget: u64,
    #[command(flatten)]
    pub out: CommonOut,
}

#[derive(Args, Debug)]
pub struct ExactMomentsArgs {
    /// Sorted positive rationals "p/q" or integers, comma separated.
    #[arg(long)]
    pub volumes: String,
    #[arg(long, value_enum, default_value = "both")]
    pub form: Form,
    #[command(flatten)]
    pub out: CommonOut,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Largest moment order checked (<= 10).
    #[arg(long, default_value = "7")]
    pub k_max: usize,
    /// Seed for the random rational volume vectors of the identity sweep.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Negative-control hook: corrupt one closed-form value on purpose.
    #[arg(long, hide = true)]
    pub corrupt: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Lattice dimension (lattice kind).
    #[arg(long)]
    pub dim: Option<u32>,
    #[arg(long)]
    pub trials: u64,
    /// Sorted volume thresholds, comma separated.
    #[arg(long)]
    pub thresholds: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub prime: Option<String>,
    /// Enumeration node budget per trial (lattice kind).
    #[arg(long, default_value = "1000000000")]
    pub node_budget: u64,
    /// Also write per-trial count vectors as CSV.
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
    /// Emit one JSON line per trial to stderr-free stdout before the report.
    #[arg(long)]
    pub emit_raw: bool,
    #[command(flatten)]
    pub out: CommonOut,
}

#[derive(Args, Debug)]
pub struct CorrelationsArgs {
    /// JSON basis file; alternatively use --gm-dim to synthesize one.
    #[arg(long, conflicts_with = "gm_dim")]
    pub basis: Option<std::path::PathBuf>,
    /// Sample a Goldstein-Mayer basis of this dimension instead.
    #[arg(long)]
    pub gm_dim: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub prime: Option<String>,
    /// Trial index for the synthesized basis.
    #[arg(long, default_value = "0")]
    pub trial: u64,
    /// Difference intervals "a:b" joined by ";", e.g. "-1:1;-1:1".
    #[arg(long, allow_hyphen_values = true)]
    pub intervals: String,
    /// Index cutoff N: tuples are drawn from the first floor(N) volumes.
    #[arg(long)]
    pub n_max: f64,
    #[arg(long, default_value = "1000000000")]
    pub node_budget: u64,
    #[command(flatten)]
    pub out: CommonOut,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Simulate report (lattice side).
    #[arg(long)]
    pub lattice: std::path::PathBuf,
    /// Simulate report (poisson side).
    #[arg(long)]
    pub poisson: std::path::PathBuf,
    /// Exact volume spec "p/q" list matching the runs' thresholds.
    #[arg(long)]
    pub volumes: String,
    #[command(flatten)]
    pub out: CommonOut,
}

#[derive(Subcommand)]
enum Command {
    /// Sample Goldstein-Mayer lattices or Poisson(1/2) point processes.
    Sample(SampleArgs),
    /// Short-vector census of one basis in ball-volume coordinates.
    Shortvec(ShortvecArgs),
    /// Exact limiting joint moments by matrix, partition, or pair form.
    ExactMoments(ExactMomentsArgs),
    /// Run the full exact-identity suite up to --k-max.
    Verify(VerifyArgs),
    /// Monte Carlo counting experiment over many seeded trials.
    Simulate(SimulateArgs),
    /// VanderKam-style m-level correlation estimate for one lattice.
    Correlations(CorrelationsArgs),
    /// Compare two simulate reports against the exact limit moments.
    Compare(CompareArgs),
}

/// Seed resolution order: --seed flag, $RANDLAT_SEED, 0.
pub fn resolve_seed(flag: Option<u64>) -> AppResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| AppError::Usage(format!("{SEED_ENV} must be a u64, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(a) => commands::sample::run(&a),
        Command::Shortvec(a) => commands::shortvec::run(&a),
        Command::ExactMoments(a) => commands::exact_moments::run(&a),
        Command::Verify(a) => commands::verify::run(&a),
        Command::Simulate(a) => commands::simulate::run(&a),
        Command::Correlations(a) => commands::correlations::run(&a),
        Command::Compare(a) => commands::compare::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
