use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "softedge", version, about = "Edge statistics of Gaussian beta-ensembles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo estimate of a DOS, gap or density histogram
    Simulate(SimulateArgs),
    /// Tabulate an exact or asymptotic function
    Exact(ExactArgs),
    /// Compare two curve CSV files
    Compare(CompareArgs),
    /// Quadrature of the joint law for N = 2, 3
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservableArg {
    Dos,
    Gap,
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rescaling {
    None,
    Bulk,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverArg {
    Full,
    TopTwo,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 200_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ObservableArg::Dos)]
    pub observable: ObservableArg,
    #[arg(long, value_enum, default_value_t = Rescaling::None)]
    pub rescaling: Rescaling,
    /// keep only samples with |λ_max − √(2N)| < WINDOW
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub bins: usize,
    /// lower histogram edge, in the units of the chosen rescaling
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    /// upper histogram edge, in the units of the chosen rescaling
    #[arg(long, allow_negative_numbers = true)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// eigenvalue path; defaults to top-two when a window is set
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactFunction {
    RhoEdge,
    PTyp,
    RhoEdgeConditional,
    PTypConditional,
    EdgeDensity,
    Wigner,
    ShiftedWigner,
    TracyWidom,
    F2Table,
    EdgeDensityLeft,
    EdgeDensityRight,
    DosSmall,
    DosLarge,
    GapSmall,
    GapLargeLeading,
    GapLargeFull,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExactArgs {
    #[arg(long, value_enum)]
    pub function: ExactFunction,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// grid start (defaults depend on the function)
    #[arg(long, alias = "r-min", allow_negative_numbers = true)]
    pub min: Option<f64>,
    /// grid end (defaults depend on the function)
    #[arg(long, alias = "r-max", allow_negative_numbers = true)]
    pub max: Option<f64>,
    #[arg(long, default_value_t = 301)]
    pub points: usize,
    /// rescaled λ_max position for the conditional functions
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    pub curve: PathBuf,
    pub reference: PathBuf,
    #[arg(long, default_value_t = f64::NEG_INFINITY, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, default_value_t = f64::INFINITY, allow_negative_numbers = true)]
    pub hi: f64,
    #[arg(long)]
    pub max_sup: Option<f64>,
    #[arg(long)]
    pub max_l2: Option<f64>,
    #[arg(long)]
    pub max_chi2: Option<f64>,
    /// write the metrics JSON here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleObservableArg {
    Gap,
    Dos,
    LambdaMax,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = OracleObservableArg::Gap)]
    pub observable: OracleObservableArg,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
