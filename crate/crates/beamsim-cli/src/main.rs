//! Command-line front end: scenario configs in, CSV data and manifests out.
//!
//! Subcommands: `simulate`, `compare-fig1`, `check-invariance`, `track-peak`.
//! Exit codes: 0 ok / claim-consistent, 1 invariant violated, 2 config error,
//! 3 runtime domain error, 4 degenerate-but-valid probe.

mod commands;
mod config;
mod errors;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ModelSpec, ScenarioConfig};
use errors::CliError;

#[derive(Parser)]
#[command(
    name = "beamsim",
    version,
    about = "Space-time beampattern simulator and metrics for linear arrays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a pattern cube and write one CSV row per grid point.
    Simulate(RunArgs),
    /// Compare an FDA range cut against Gaussian- and rect-pulse phased arrays.
    CompareFig1(RunArgs),
    /// Check the time-range shift law and probe fixed-point time variance.
    CheckInvariance(RunArgs),
    /// Track the per-instant pattern peak and fit its range speed.
    TrackPeak(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario config file (JSON).
    #[arg(long)]
    config: PathBuf,

    /// Output path prefix; files are written as `<out>.<name>.csv` plus
    /// `<out>.manifest.json`.
    #[arg(long, default_value = "out")]
    out: String,

    /// Random seed; overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,

    /// Delay model; overrides the config's `model`.
    #[arg(long, value_enum)]
    model: Option<ModelSpec>,

    /// Worker threads for cube evaluation (0 = auto). Results are
    /// bit-identical for any value.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

/// Everything a command needs after config load and flag resolution.
pub struct RunContext {
    pub config: ScenarioConfig,
    pub model: ModelSpec,
    pub seed: u64,
    pub out: String,
}

fn build_context(args: &RunArgs) -> Result<RunContext, CliError> {
    let config = ScenarioConfig::load(&args.config)?;
    let model = args.model.or(config.model).unwrap_or(ModelSpec::Farfield);
    let seed = args.seed.or(config.seed).unwrap_or(0);
    Ok(RunContext {
        config,
        model,
        seed,
        out: args.out.clone(),
    })
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: usize) -> Result<(), CliError> {
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool setup: {e}")))?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: usize) -> Result<(), CliError> {
    Ok(())
}

type CommandFn = fn(&RunContext) -> Result<i32, CliError>;

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    let (args, runner): (&RunArgs, CommandFn) = match &cli.command {
        Command::Simulate(args) => (args, commands::simulate::run),
        Command::CompareFig1(args) => (args, commands::fig1::run),
        Command::CheckInvariance(args) => (args, commands::invariance::run),
        Command::TrackPeak(args) => (args, commands::track::run),
    };
    configure_threads(args.threads)?;
    let ctx = build_context(args)?;
    runner(&ctx)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
