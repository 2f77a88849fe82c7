use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use godisc_core::eval::{DEFAULT_FOLDS, DEFAULT_SEED};
use godisc_core::scatter::DEFAULT_DELTA;
use godisc_core::{ClassifierKind, Method};

#[derive(Debug, Parser)]
#[command(name = "godisc", version, about = "Orthogonal discriminant subspaces and benchmark harness")]
pub struct Cli {
    /// Directory holding registry.txt (defaults to $GODISC_DATA_DIR, then ./data).
    #[arg(long, global = true, value_name = "DIR")]
    pub data_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a subspace method and write the model as JSON.
    Fit(FitArgs),
    /// Project a dataset onto a model's directions.
    Project(ProjectArgs),
    /// Fisher ratio of each direction on the full dataset.
    FisherCurve(CurveArgs),
    /// Cross-validated accuracy using each direction alone.
    PerDirection(PerDirectionArgs),
    /// Cross-validated accuracy in the span of the first l directions.
    Subspace(SubspaceArgs),
    /// Wall time of classic-LDA against GO-LDA on synthetic blobs.
    Timing(TimingArgs),
    /// SVG scatter plot of the projection onto two directions.
    Scatter(ScatterArgs),
    /// List the registered datasets.
    Datasets(OutputArgs),
    /// Class statistics and scatter matrices of a dataset.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepArg {
    Features,
    Samples,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Registered dataset name, or path to a CSV file.
    #[arg(long)]
    pub dataset: String,
    /// Label column (index, header name or "last") for CSV paths.
    #[arg(long, default_value = "last")]
    pub label: String,
    /// Standardize feature columns (overrides the registry flag when given).
    #[arg(long)]
    pub standardize: Option<bool>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    /// Number of directions; defaults to the method's maximum, capped at 15.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    /// Fitted model file.
    #[arg(long, value_name = "PATH", conflicts_with = "method")]
    pub model: Option<PathBuf>,
    /// Fit this method in-process instead of loading a model.
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    /// 1-based directions to keep, e.g. 4,5.
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[arg(long, default_value_t = DEFAULT_FOLDS)]
    pub folds: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    /// Neighbours for the knn classifier.
    #[arg(long, default_value_t = 1)]
    pub neighbors: usize,
}

#[derive(Debug, Args)]
pub struct PerDirectionArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    #[arg(long, value_parser = parse_classifier)]
    pub classifier: ClassifierKind,
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub cv: CvArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SubspaceArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    #[arg(long, value_parser = parse_classifier)]
    pub classifier: ClassifierKind,
    /// Subspace dimensions, e.g. 1,2,3.
    #[arg(long = "l", value_delimiter = ',', required = true)]
    pub l_values: Vec<usize>,
    #[command(flatten)]
    pub cv: CvArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TimingArgs {
    #[arg(long, value_enum)]
    pub sweep: SweepArg,
    /// Ascending sweep sizes (M for features, N for samples).
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub classes: usize,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    /// Two 1-based direction indices, e.g. 4,5.
    #[arg(long, value_delimiter = ',', required = true)]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: godisc_core::Error| e.to_string())
}

fn parse_classifier(s: &str) -> Result<ClassifierKind, String> {
    s.parse().map_err(|e: godisc_core::Error| e.to_string())
}
