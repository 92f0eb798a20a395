use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lasso_screen::experiments::DictionaryKind;
use lasso_screen::RegionKind;
use serde::Serialize;

/// Lasso solving with safe screening, and the radius-ratio and
/// FLOP-budgeted benchmark experiments.
#[derive(Debug, Parser)]
#[command(name = "lasso-screen", version)]
pub struct Cli {
    /// Base seed of every random instance.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Directory receiving the output files.
    #[arg(long, global = true, default_value = "results")]
    pub out_dir: PathBuf,

    /// Configuration file: JSON object, a previous run's manifest.json, or
    /// `key = value` lines. Command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for independent trials.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and write its trace.
    Solve(SolveArgs),
    /// Hölder-dome to GAP-dome radius ratios along unscreened runs.
    RadiusRatio(RadiusRatioArgs),
    /// Calibrate a FLOP budget and build performance profiles.
    Benchmark(BenchmarkArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::RadiusRatio(_) => "radius-ratio",
            Command::Benchmark(_) => "benchmark",
        }
    }
}

// Flags serialize to the configuration keys they override; absent flags
// are skipped so that lower-precedence layers show through.

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    /// Rows of the generated dictionary.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Atoms of the generated dictionary.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dict: Option<DictionaryKind>,
    /// Width of the Toeplitz bumps (default m/50).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toeplitz_sigma: Option<f64>,
    /// λ as a fraction of λ_max (required).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_ratio: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionKind>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    /// Stop once this many FLOPs are spent (0 = unlimited).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flop_budget: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub screen_every: Option<usize>,
    /// Read A and y from a text file instead of generating them.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RadiusRatioArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Dictionaries to run, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dict: Option<Vec<DictionaryKind>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toeplitz_sigma: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_ratios: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Strictly decreasing gap levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_checkpoints: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchmarkArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Dictionaries to run, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dict: Option<Vec<DictionaryKind>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toeplitz_sigma: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_ratios: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Common budget; 0 calibrates one per setup.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flop_budget: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_rho: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_tau: Option<f64>,
    /// Strictly increasing profile thresholds, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_taus: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
}
