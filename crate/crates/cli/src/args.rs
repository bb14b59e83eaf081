use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "evdmm",
    version,
    about = "Max-min dependence coefficients for multivariate extreme value distributions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact coefficient, e-terms and bounds for a parametric model
    Eval(EvalArgs),
    /// Rank-based estimate from a CSV of observations
    Estimate(EstimateArgs),
    /// Draw a sample with unit Fréchet margins and write it as CSV
    Simulate(SimulateArgs),
    /// Compare exact values with Monte Carlo estimates
    Validate(ValidateArgs),
    /// Turn price series into block maxima of negative log-returns
    Ingest(IngestArgs),
    /// Rebuild the four coefficient estimates from the bundled market table
    Table1(FormatArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Logistic,
    M4,
    Independence,
    Comonotone,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Ecdf {
    /// count / n
    #[default]
    N,
    /// count / (n + 1)
    NPlusOne,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Logistic dependence parameter in (0, 1]
    #[arg(long)]
    pub theta: Option<f64>,
    /// Number of components (taken from the coefficient file for m4 when omitted)
    #[arg(long)]
    pub dim: Option<usize>,
    /// CSV with columns signature_id,component_index,alpha
    #[arg(long)]
    pub alpha_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StructureArgs {
    /// Blocks as "1,2|3" (1-based indices) or column names; defaults to one block per component
    #[arg(long)]
    pub groups: Option<String>,
    /// Comma-separated block weights; defaults to 1 for every block
    #[arg(long)]
    pub lambda: Option<String>,
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV with a header row of column names
    #[arg(long)]
    pub input: PathBuf,
    /// Column to ignore (for example a date column); repeatable
    #[arg(long = "skip-column")]
    pub skip_columns: Vec<String>,
    #[arg(long, value_enum, default_value_t = Ecdf::N)]
    pub ecdf: Ecdf,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest accepted absolute gap between exact and Monte Carlo values
    #[arg(long, default_value_t = 0.01)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// CSV with a date column and one column of prices per series
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "date")]
    pub date_column: String,
    /// Block labelling: month, year, or column:<name>
    #[arg(long, default_value = "month")]
    pub block: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
