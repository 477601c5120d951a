use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use inckm::Metric;

#[derive(Debug, Parser)]
#[command(name = "inckm", version, about = "Fit, incrementally update and benchmark K-means models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run K-means on a dataset and store the resulting model.
    Fit(FitArgs),
    /// Assign new records to the nearest stored centroid without refitting.
    Update(UpdateArgs),
    /// Remove records from a stored model and recompute the affected means.
    Delete(DeleteArgs),
    /// Compare full refits against incremental insertion over a δ grid.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Comma-separated feature columns (default: every numeric column).
    #[arg(long, value_delimiter = ',')]
    pub features: Option<Vec<String>>,
    /// Column holding integer record ids.
    #[arg(long)]
    pub id_column: Option<String>,
    /// Treat the first CSV row as data.
    #[arg(long)]
    pub no_header: bool,
    /// Drop rows with missing values instead of failing.
    #[arg(long)]
    pub skip_missing: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// ARFF or CSV dataset.
    pub data: PathBuf,
    #[arg(short, long)]
    pub k: usize,
    #[arg(long, default_value = "euclidean")]
    pub metric: Metric,
    /// `first-k-distinct`, or explicit centroids such as `15;5;1` or `1,2;3,4`.
    #[arg(long, default_value = "first-k-distinct")]
    pub init: String,
    #[arg(long, default_value_t = inckm::DEFAULT_MAX_ITERATIONS)]
    pub max_iterations: u64,
    /// Model file to write; the membership sidecar goes next to it.
    #[arg(long, short = 'o')]
    pub model_out: PathBuf,
    /// Also write the printed tables as CSV here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct UpdateArgs {
    /// Stored model file.
    pub model: PathBuf,
    /// New records, with the model's attribute columns.
    pub data: PathBuf,
    /// Move each receiving centroid to the running mean of its members.
    #[arg(long)]
    pub update_means: bool,
    /// δ% beyond which a refit is advised, used when no benchmark result is
    /// recorded for the model's dataset.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Threshold registry written by `bench`.
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// Original dataset, checked against the model's fingerprint.
    #[arg(long)]
    pub base_data: Option<PathBuf>,
    /// Fail instead of warning when `--base-data` does not match.
    #[arg(long, requires = "base_data")]
    pub strict_fingerprint: bool,
    /// Column holding integer record ids (default: continue after the largest stored id).
    #[arg(long)]
    pub id_column: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    #[arg(long)]
    pub skip_missing: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeleteArgs {
    /// Stored model file.
    pub model: PathBuf,
    /// Record ids, or labels for tokens that are not integers.
    pub records: Vec<String>,
    /// Treat every token as a label.
    #[arg(long)]
    pub by_label: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Dataset whose first `--base-size` records form the base.
    #[arg(required_unless_present = "replay")]
    pub data: Option<PathBuf>,
    #[arg(short, long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value = "euclidean")]
    pub metric: Metric,
    #[arg(long, default_value_t = 1000)]
    pub base_size: usize,
    /// Batch sizes, comma-separated and strictly increasing.
    #[arg(long, value_delimiter = ',', default_value = "100,200,300,400,500,600")]
    pub deltas: Vec<usize>,
    #[arg(long, default_value_t = inckm::bench::DEFAULT_REPETITIONS)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative noise for resampled batch records.
    #[arg(long, default_value_t = inckm::bench::DEFAULT_NOISE)]
    pub noise: f64,
    /// Read cost rows from a CSV instead of measuring.
    #[arg(long, conflicts_with_all = ["extension", "synthesize"])]
    pub replay: Option<PathBuf>,
    /// Take batch records from this file, in order.
    #[arg(long)]
    pub extension: Option<PathBuf>,
    /// Pad the base by resampling when the dataset is smaller than `--base-size`.
    #[arg(long)]
    pub synthesize: bool,
    #[arg(long)]
    pub registry: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
}
