use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Learn low-rank transforms for subspace clustering and classification.
///
/// Matrix files hold one point per row: `.csv` files are comma separated,
/// anything else uses the binary format. Label files hold one integer per
/// line. Set LRT_THREADS to cap worker threads (0 = automatic) and RUST_LOG
/// for diagnostics.
#[derive(Debug, Parser)]
#[command(name = "lrt", version)]
pub struct Cli {
    /// JSON run configuration; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Root seed (default 42); each component derives its own from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    Synth(SynthArgs),
    Learn(LearnArgs),
    Cluster(ClusterArgs),
    Classify(ClassifyArgs),
    Angles(AnglesArgs),
}

/// Generate a synthetic union-of-subspaces data set.
///
/// The bases CSV has columns subspace,vector,x0..x{d-1}, one row per
/// orthonormal basis vector.
#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Inline JSON spec or a path to one; falls back to the config's synth
    /// section.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long)]
    pub out_matrix: PathBuf,
    #[arg(long)]
    pub out_labels: Option<PathBuf>,
    #[arg(long)]
    pub out_bases: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LearnMode {
    Global,
    PerClass,
    Online,
}

/// Learn a transform from labeled data.
///
/// The trace CSV has columns iteration,objective,spectral_norm_T with the
/// initial value at iteration 0. Online runs concatenate the per-batch
/// phases.
#[derive(Debug, Args)]
pub struct LearnArgs {
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = LearnMode::Global)]
    pub mode: LearnMode,
    /// Mini-batch count for online mode.
    #[arg(long)]
    pub minibatches: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Model directory to write.
    #[arg(long)]
    pub out_model: PathBuf,
    #[arg(long)]
    pub trace_csv: Option<PathBuf>,
}

/// Cluster points, optionally alternating with transform learning.
///
/// The report CSV has one row per clustering pass with columns
/// iteration,misclassification,lrsc_objective,nuclear_norm_<c> for every
/// cluster, then smallest_angle_<a>_<b> for every cluster pair. The
/// misclassification column is empty without --truth.
#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Global transform model applied to the data first.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// `rssc` or the name of a registered clusterer such as `kmeans`.
    #[arg(long)]
    pub method: Option<String>,
    /// Number of clusters.
    #[arg(short = 'C', long = "clusters")]
    pub clusters: usize,
    /// Neighbors per point for rssc.
    #[arg(short = 'K', long = "neighbors")]
    pub neighbors: Option<usize>,
    /// Alternate clustering with transform learning.
    #[arg(long)]
    pub lrsc: bool,
    #[arg(long)]
    pub max_outer: Option<usize>,
    /// Ground-truth labels for the misclassification column.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub out_assignments: Option<PathBuf>,
    #[arg(long)]
    pub report_csv: Option<PathBuf>,
    /// Dimension of the fitted cluster subspaces used for angles; estimated
    /// from 95% of the energy when absent.
    #[arg(long)]
    pub subspace_dim: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Nn,
    Omp,
}

/// Train a classifier on transformed features and evaluate it.
///
/// Prints the accuracy. The report CSV has columns
/// index,true,predicted,residual, one row per test point; residual is the
/// distance (nn) or reconstruction residual (omp) of the winning class.
#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub train_data: Option<PathBuf>,
    #[arg(long)]
    pub train_labels: Option<PathBuf>,
    #[arg(long)]
    pub test_data: Option<PathBuf>,
    #[arg(long)]
    pub test_labels: Option<PathBuf>,
    /// Transform model directory; raw features when absent.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub sparsity: Option<usize>,
    #[arg(long)]
    pub out_report: Option<PathBuf>,
    /// Also save the trained classifier to this directory.
    #[arg(long)]
    pub save_classifier: Option<PathBuf>,
}

/// Principal angles and nuclear norms of the labeled classes.
///
/// The CSV is in long format with columns stage,quantity,class_a,class_b,value.
/// stage is `before`, or `after` when a model is given. quantity is
/// smallest_angle or mean_cosine (per class pair) or nuclear_norm (class_b
/// empty). Under a per-class model the pair (a, b) is measured with T_a.
#[derive(Debug, Args)]
pub struct AnglesArgs {
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub out_csv: PathBuf,
    /// Dimension of the fitted class subspaces; estimated from 95% of the
    /// energy when absent.
    #[arg(long)]
    pub subspace_dim: Option<usize>,
}
