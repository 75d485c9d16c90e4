//! `adr` — command-line front end for the debris-removal planning pipeline.
//!
//! Subcommands cover the full path from raw TLE text to a validated
//! mission plan: `fetch` and `ingest` produce instance documents, `export`
//! bridges to external annealers, `solve`/`oracle`/`validate` search and
//! check, and `landscape` emits plot data. Every written document embeds a
//! run manifest; exit codes are 0 (success, and the result is valid),
//! 1 (usage), 2 (data), 3 (no valid solution).

mod commands;
mod manifest;

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "adr",
    version,
    about = "Mission planning for active debris removal: TLE ingestion, QUBO assembly, sampling solvers, plan validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a TLE file and write a problem-instance document.
    Ingest(IngestArgs),
    /// Build the model for an instance and run a solver over it.
    Solve(SolveArgs),
    /// Enumerate the feasible sequences of an instance by brute force.
    Oracle(OracleArgs),
    /// Check a bit vector or visit sequence against all constraints.
    Validate(ValidateArgs),
    /// Emit (integer, energy) samples of the model landscape for plotting.
    Landscape(LandscapeArgs),
    /// Write the model in plain-text form for external annealers.
    Export(ExportArgs),
    /// Download TLE data over HTTPS into the local cache.
    Fetch(FetchArgs),
}

/// Penalty-weight overrides shared by the model-building commands.
#[derive(Args, Clone, Copy)]
struct WeightArgs {
    /// Objective weight.
    #[arg(long, default_value_t = 1.0)]
    lh: f64,
    /// Tour-size penalty weight.
    #[arg(long, default_value_t = 2500.0)]
    l1: f64,
    /// Depot-departure penalty weight.
    #[arg(long, default_value_t = 300.0)]
    l2: f64,
    /// Depot-arrival penalty weight.
    #[arg(long, default_value_t = 300.0)]
    l3: f64,
    /// Departure-degree penalty weight.
    #[arg(long, default_value_t = 300.0)]
    l4: f64,
    /// Arrival-degree penalty weight.
    #[arg(long, default_value_t = 300.0)]
    l5: f64,
    /// Flow-balance penalty weight.
    #[arg(long, default_value_t = 2500.0)]
    l6: f64,
    /// Two-cycle penalty weight.
    #[arg(long, default_value_t = 4000.0)]
    l7: f64,
    /// Servicing-window penalty weight.
    #[arg(long, default_value_t = 5000.0)]
    l8: f64,
}

#[derive(Args)]
struct IngestArgs {
    /// TLE file (two- or three-line records).
    tle_path: PathBuf,
    /// Number of debris to remove in one mission.
    #[arg(long = "n-select", default_value_t = 5)]
    n_select: usize,
    /// Mission deadline, days from t0.
    #[arg(long = "t-max", default_value_t = 365.0)]
    t_max: f64,
    /// On-orbit servicing time per debris, days.
    #[arg(long = "t-service", default_value_t = 20.0)]
    t_service: f64,
    /// Mission start: ISO date (2023-09-30) or days since the TLE epoch
    /// origin. Defaults to the newest epoch in the catalog.
    #[arg(long)]
    t0: Option<String>,
    /// Skip unparseable records (with warnings) instead of rejecting the file.
    #[arg(long)]
    skip_bad: bool,
    /// Output path; defaults to the TLE file with extension `.instance.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    /// Steepest descent from the all-zeros vector.
    Sd,
    /// Tabu search.
    Tabu,
    /// Simulated annealing.
    Sa,
    /// Exhaustive enumeration (guarded).
    Exact,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance document from `ingest` (or hand-written).
    instance_path: PathBuf,
    #[arg(long, value_enum)]
    solver: SolverKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    reads: usize,
    /// Annealing sweeps per read.
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    /// Tabu recency, iterations (at most 20).
    #[arg(long, default_value_t = 20)]
    tenure: usize,
    #[command(flatten)]
    weights: WeightArgs,
    /// Sample-set output; defaults to the instance path with `.samples.json`.
    #[arg(long)]
    samples_out: Option<PathBuf>,
    /// Plan-report output; defaults to the instance path with `.plan.json`.
    #[arg(long)]
    plan_out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    instance_path: PathBuf,
    /// Also write the listing as a JSON document.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("subject").required(true).args(["bits", "sequence"])))]
struct ValidateArgs {
    instance_path: PathBuf,
    /// Bit vector as a 0/1 string in registry order.
    #[arg(long)]
    bits: Option<String>,
    /// Visit order as comma-separated debris indices, e.g. 1,3,4.
    #[arg(long)]
    sequence: Option<String>,
}

#[derive(Args)]
struct LandscapeArgs {
    instance_path: PathBuf,
    #[arg(long, default_value_t = 0)]
    start: u64,
    /// One past the last integer code to scan.
    #[arg(long)]
    stop: u64,
    #[arg(long, default_value_t = 1)]
    stride: u64,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    weights: WeightArgs,
}

#[derive(Args)]
struct ExportArgs {
    instance_path: PathBuf,
    /// Model output path; the name map lands next to it with `.names` added.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    weights: WeightArgs,
}

#[derive(Args)]
struct FetchArgs {
    /// Full URL, or an international designator (e.g. 1982-092) to query
    /// the CelesTrak general-perturbations endpoint.
    source: String,
    /// Output path; defaults into the cache directory (ADR_TLE_CACHE, or
    /// the working directory when unset).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Refuse network access; points the caller at local files instead.
    #[arg(long)]
    offline: bool,
}

/// Command failure with its exit-code category.
#[derive(Debug)]
enum CliError {
    /// Bad invocation: flag values out of range, conflicting modes.
    Usage(String),
    /// Bad or unusable input data, unreadable/unwritable files, network.
    Data(String),
    /// The pipeline ran but produced no constraint-satisfying result.
    Invalid(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Invalid(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Invalid(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outcomes; everything else is
            // a usage error.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Ingest(args) => commands::cmd_ingest(&args),
        Command::Solve(args) => commands::cmd_solve(&args),
        Command::Oracle(args) => commands::cmd_oracle(&args),
        Command::Validate(args) => commands::cmd_validate(&args),
        Command::Landscape(args) => commands::cmd_landscape(&args),
        Command::Export(args) => commands::cmd_export(&args),
        Command::Fetch(args) => commands::cmd_fetch(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
