use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "entwit", version, about = "Nonlinear entanglement witnesses for bipartite states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for random frames and search restarts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Simplex convergence tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Search restarts (filter samples for `distill`).
    #[arg(long, global = true, default_value_t = 50)]
    pub restarts: usize,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Relative weighting of the p and q terms.
    #[arg(long, global = true, value_enum, default_value_t = Scaling::Standard)]
    pub scaling: Scaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scaling {
    /// Operators exactly as defined.
    Standard,
    /// p scaled by mn and q by 4.
    Tight,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the witness for one state in one frame.
    Eval(EvalArgs),
    /// Evaluate a state family over a parameter grid.
    Scan(ScanArgs),
    /// Search local frames for the largest violation.
    MaxViolation(MaxViolationArgs),
    /// Look for distillability evidence through local qubit filters.
    Distill(DistillArgs),
    /// Run the built-in consistency checks.
    Verify,
}

/// Family selection. `--f`, `--alpha` and `--p` take a number, or a
/// `start:stop:step` grid for `scan`.
#[derive(Debug, Clone, Default, Args)]
pub struct StateArgs {
    /// horodecki, isotropic, werner, example4, max_entangled, product, random_mixture
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Mixture size for random_mixture.
    #[arg(long)]
    pub k: Option<usize>,
    /// State file with fields m, n, re, im (row-major).
    #[arg(long, conflicts_with = "family")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Identity frame (the default).
    #[arg(long, conflicts_with_all = ["random_frame", "unitaries"])]
    pub identity: bool,
    /// Haar-random frame drawn from `--seed`.
    #[arg(long, conflicts_with = "unitaries")]
    pub random_frame: bool,
    /// Frame file with fields u and v, each {d, re, im}.
    #[arg(long)]
    pub unitaries: Option<PathBuf>,
    /// Also evaluate the 3x3 inequality.
    #[arg(long)]
    pub eq8: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Add the 3x3 inequality columns (horodecki only).
    #[arg(long)]
    pub eq8: bool,
    /// Add the optimized violation at each grid point.
    #[arg(long)]
    pub optimize: bool,
}

#[derive(Debug, Args)]
pub struct MaxViolationArgs {
    #[command(flatten)]
    pub state: StateArgs,
}

#[derive(Debug, Args)]
pub struct DistillArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    /// Run the fixed filters and frame of the 4x4 example, at `--p` or at
    /// p = 0.1, ..., 1.0.
    #[arg(long, conflicts_with_all = ["family", "input"])]
    pub example4: bool,
}
