use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use screening::{PosteriorKind, DEFAULT_CAP, DEFAULT_TOLERANCE};

/// Expected false results, repeated-testing posteriors and discharge rules
/// for imperfect diagnostic tests.
#[derive(Debug, Parser)]
#[command(name = "screening", version)]
pub struct Cli {
    /// Emit machine-readable JSON (full precision) instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected false positives and negatives from testing a population once.
    Eval(EvalArgs),
    /// Posterior probability of infection after k repeated tests.
    Repeat(RepeatArgs),
    /// Minimal consecutive negatives needed before discharge.
    ///
    /// A miss probability exactly equal to the tolerance counts as meeting it.
    Discharge(DischargeArgs),
    /// Daily test-everyone evaluation of a confirmed-case series.
    Cohort(CohortArgs),
    /// Seeded Monte Carlo estimates.
    Simulate(SimulateArgs),
    /// Plot data for false-count and posterior figures 1-6.
    Curves(CurvesArgs),
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Built-in test: hutchison (0.60/0.90) or biomedomics (0.8866/0.9063).
    #[arg(long = "test", default_value = "hutchison", conflicts_with_all = ["sensitivity", "specificity"])]
    pub preset: String,

    /// Custom test sensitivity (requires --specificity).
    #[arg(long, requires = "specificity")]
    pub sensitivity: Option<f64>,

    /// Custom test specificity (requires --sensitivity).
    #[arg(long, requires = "sensitivity")]
    pub specificity: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub population: f64,

    /// Number infected.
    #[arg(
        long,
        conflicts_with = "prevalence",
        required_unless_present = "prevalence"
    )]
    pub infected: Option<f64>,

    /// Fraction infected.
    #[arg(long)]
    pub prevalence: Option<f64>,

    #[command(flatten)]
    pub test: TestArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    FirstPositive,
    AllNegative,
}

impl From<KindArg> for PosteriorKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::FirstPositive => PosteriorKind::FirstPositive,
            KindArg::AllNegative => PosteriorKind::AllNegative,
        }
    }
}

#[derive(Debug, Args)]
pub struct RepeatArgs {
    #[arg(long)]
    pub prevalence: f64,

    /// Number of tests.
    #[arg(long)]
    pub k: u32,

    #[arg(long, value_enum, default_value = "all-negative")]
    pub kind: KindArg,

    /// Tolerance reported against the all-negative posterior.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,

    #[command(flatten)]
    pub test: TestArgs,
}

#[derive(Debug, Args)]
pub struct DischargeArgs {
    /// Comma-separated ward prevalences, each in [0, 1).
    #[arg(long, value_delimiter = ',', required = true)]
    pub prevalence: Vec<f64>,

    /// Largest acceptable probability of discharging a carrier.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,

    /// Largest k searched before reporting "unreachable".
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u32,

    #[command(flatten)]
    pub test: TestArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Builtin {
    DiamondPrincess,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Daily,
    Cumulative,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AllocationArg {
    Terminal,
    Uniform,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Table,
    Json,
    Both,
}

#[derive(Debug, Args)]
pub struct CohortArgs {
    #[arg(
        long,
        value_enum,
        conflicts_with = "input",
        required_unless_present = "input"
    )]
    pub builtin: Option<Builtin>,

    /// Series file: `initial_population=<int>` then `day,new_confirmed` rows.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Output file stem (defaults to the series name or input file stem).
    #[arg(long)]
    pub name: Option<String>,

    #[arg(long, value_enum, default_value = "daily")]
    pub mode: ModeArg,

    /// Placement of the 84 cases reported for days 33-44 of the built-in series.
    #[arg(long, value_enum, default_value = "terminal")]
    pub allocation: AllocationArg,

    #[arg(long, default_value_t = 17)]
    pub start_day: u32,

    /// Directory for the emitted series files.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Which files to write under --out.
    #[arg(long, value_enum, default_value = "both")]
    pub format: FormatArg,

    #[command(flatten)]
    pub test: TestArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SimKind {
    FirstPositive,
    AllNegative,
    /// Test a population once and tally outcomes.
    Screen,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "all-negative")]
    pub kind: SimKind,

    #[arg(long)]
    pub prevalence: f64,

    #[arg(long, default_value_t = 1)]
    pub k: u32,

    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    /// Population size for --kind screen.
    #[arg(long, default_value_t = 1_000_000)]
    pub population: u64,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Split trials over this many independent streams (a distinct,
    /// separately reproducible mode).
    #[arg(long)]
    pub partitions: Option<u64>,

    #[command(flatten)]
    pub test: TestArgs,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    /// 1: false negatives vs sensitivity; 2: false positives vs specificity;
    /// 3/5: first-positive/all-negative posterior over sensitivity x specificity;
    /// 4/6: first-positive/all-negative posterior vs prevalence for k = 1..6.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    pub figure: u8,

    /// Grid points per axis.
    #[arg(long, default_value_t = 101)]
    pub points: usize,

    /// Population size for figures 1 and 2.
    #[arg(long, default_value_t = 10_000.0)]
    pub population: f64,

    /// Write CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub test: TestArgs,
}
