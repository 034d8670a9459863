//! The `blackwell` command line.
//!
//! Flags and an optional JSON config file (`--config`) feed the same set of
//! keys; flags win. Everything is validated into an [`ExperimentConfig`]
//! before a single trial runs.
//!
//! Exit codes: 0 on success, 2 on a usage or validation error, 3 when
//! `verify` finds a claim whose Monte Carlo estimate disagrees with its
//! reference value.

mod config;
mod run;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

pub use config::{parse_config, ExperimentConfig, RailSetup, ScenarioConfig};
pub use run::{run, RunOutput, RunRecord};
pub use verify::{verify_all, ClaimRow, ClaimStatus, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "blackwell",
    version,
    about = "Pointer strategies for guessing a coin toss: simulate, enumerate, verify"
)]
pub struct Cli {
    /// Monte Carlo trials (per claim for `verify`)
    #[arg(long, global = true)]
    pub trials: Option<u64>,

    /// Master seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Confidence level of the reported Wilson interval
    #[arg(long, global = true)]
    pub confidence: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// JSON file with the same keys as the flags; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for the trial runner (results do not depend on this)
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two envelopes and a switching pointer
    Envelope(EnvelopeArgs),
    /// The straight random railroad
    Rail(RailArgs),
    /// The circular track with a reference station
    Circular(CircularArgs),
    /// The reflecting-barrier chain
    Markov(MarkovArgs),
    /// Run every claim and print the verification report
    Verify,
}

#[derive(Debug, Args, Default)]
pub struct EnvelopeArgs {
    /// uniform:a,b | exp:rate | normal:mean,sd
    #[arg(long)]
    pub pointer: Option<String>,
    #[arg(long)]
    pub lesser: Option<f64>,
    #[arg(long)]
    pub greater: Option<f64>,
    /// Label the envelopes heads/tails and guess a coin toss
    #[arg(long)]
    pub postdiction: bool,
    /// Heads probability of the coin (postdiction only; simulation only)
    #[arg(long)]
    pub heads_prob: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct RailArgs {
    /// postdiction | predict-dest-first | predict-origin-first | control
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub pointer: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub destination: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub origin: Option<i64>,
    /// Station names, one per line, west to east (named postdiction)
    #[arg(long)]
    pub stations: Option<PathBuf>,
    /// Heads probability; in the destination framings, the chance the train came from the west
    #[arg(long)]
    pub heads_prob: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct CircularArgs {
    /// Number of stations on the loop
    #[arg(long)]
    pub stations: Option<u64>,
    /// arcs:w0,...,wN or uniform
    #[arg(long)]
    pub arcs: Option<String>,
    /// opposite | fixed:<idx>
    #[arg(long)]
    pub rs_policy: Option<String>,
    /// Condition on this destination station
    #[arg(long)]
    pub destination: Option<u64>,
}

#[derive(Debug, Args, Default)]
pub struct MarkovArgs {
    #[arg(long)]
    pub stations: Option<u64>,
    #[arg(long)]
    pub destination: Option<i64>,
    #[arg(long)]
    pub min_end_distance: Option<u64>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Invalid(crate::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(e) => write!(f, "{e}"),
            CliError::Invalid(e) => write!(f, "error: {e}"),
            CliError::Io(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Invalid(e)
    }
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    main_with(std::env::args_os(), &mut stdout.lock())
}

/// Entry point with explicit arguments and output sink.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_config(args) {
        Ok(c) => c,
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            return e.exit_code();
        }
        Err(e) => {
            eprintln!("{e}");
            return EXIT_INVALID;
        }
    };
    match run(&config) {
        Ok(output) => match output.emit(&config, stdout) {
            Ok(()) => output.exit_code(),
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Err(e) => {
            eprintln!("{e}");
            EXIT_INVALID
        }
    }
}
