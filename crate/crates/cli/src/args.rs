use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use entfilter_core::filtering::{MAX_ITER, TAU_CONV};
use entfilter_core::scan::{AngleRange, DEFAULT_A1, DEFAULT_A2};

#[derive(Debug, Parser)]
#[command(
    name = "entfilter",
    version,
    about = "Concurrence and optimal local filtering of two-qubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalized concurrence of a state, with the spectrum behind it.
    Concurrence(ConcurrenceArgs),
    /// Run the filtering iteration and report the optimal local filters.
    Maximize(MaximizeArgs),
    /// Per-step concurrence of the filtering iteration as CSV.
    Trace(TraceArgs),
    /// Concurrence over the two-angle filter family as CSV.
    Scan(ScanArgs),
    /// Best outcome over random local filter pairs.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
pub struct StateArg {
    /// Built-in state (phi-plus, bell, paper-rho-tilde, product-00) or a
    /// path to a state JSON file. Built-in names take precedence.
    #[arg(long, value_name = "NAME|PATH")]
    pub state: String,
}

#[derive(Debug, Args)]
pub struct IterationArgs {
    #[arg(long, default_value_t = MAX_ITER)]
    pub max_iter: usize,

    /// Stop once both marginals are within this Frobenius distance of I/2.
    #[arg(long, default_value_t = TAU_CONV)]
    pub tol: f64,

    /// Qubit balanced first.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub start_side: u8,

    /// Only alternate single-qubit balance steps; never take joint steps.
    #[arg(long)]
    pub no_accelerate: bool,
}

#[derive(Debug, Args)]
pub struct ConcurrenceArgs {
    #[command(flatten)]
    pub input: StateArg,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MaximizeArgs {
    #[command(flatten)]
    pub input: StateArg,

    #[command(flatten)]
    pub iteration: IterationArgs,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write the per-step trace as CSV.
    #[arg(long)]
    pub trace_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub input: StateArg,

    #[command(flatten)]
    pub iteration: IterationArgs,

    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub input: StateArg,

    /// Closed range `lo:hi:steps` for theta1 [default: 201 points over [0, pi)].
    #[arg(long, value_name = "LO:HI:STEPS")]
    pub theta1: Option<AngleRange>,

    /// Closed range `lo:hi:steps` for theta2 [default: 201 points over [0, pi)].
    #[arg(long, value_name = "LO:HI:STEPS")]
    pub theta2: Option<AngleRange>,

    #[arg(long, default_value_t = DEFAULT_A1)]
    pub a1: f64,

    #[arg(long, default_value_t = DEFAULT_A2)]
    pub a2: f64,

    /// Vary only this angle; the other is pinned with `--fix`.
    #[arg(long, value_parser = ["theta1", "theta2"])]
    pub slice: Option<String>,

    /// Pin one angle, e.g. `theta1=0.9427`.
    #[arg(long, value_name = "ANGLE=VALUE")]
    pub fix: Option<String>,

    /// Rescan around the coarse argmax with this many points per axis and
    /// report the refined argmax.
    #[arg(long, value_name = "STEPS")]
    pub refine: Option<usize>,

    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Write a JSON report with the argmax.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub input: StateArg,

    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
