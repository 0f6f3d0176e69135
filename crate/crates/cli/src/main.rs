mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use discern::{Format, MetricKind};

/// Deterministic centroid seeding, cluster-count estimation and K-Means.
#[derive(Debug, Parser)]
#[command(name = "discern", version)]
struct Cli {
    /// Worker threads; all cores when unset.
    #[arg(long, global = true, env = "DISCERN_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the number of clusters and print it.
    EstimateK(EstimateArgs),
    /// Cluster a dataset and write labels, centroids and a report.
    Cluster(ClusterArgs),
    /// Compare initialization methods against ground truth.
    Compare(CompareArgs),
    /// Write the diversity curve and its curvature.
    Curve(CurveArgs),
    /// Score an existing labeling.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Feature matrix, comma separated (tab separated for .tsv). A first
    /// row with no numeric field is treated as a header.
    #[arg(long)]
    data: PathBuf,

    /// Ground-truth labels, one per row (last column is used).
    #[arg(long, conflicts_with = "label_column")]
    labels: Option<PathBuf>,

    /// Zero-based column of --data holding ground-truth labels. When
    /// omitted, a header column named label, class, species or target is used.
    #[arg(long)]
    label_column: Option<usize>,

    #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
    metric: MetricArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    Cosine,
}

impl From<MetricArg> for MetricKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Euclidean => MetricKind::Euclidean,
            MetricArg::Cosine => MetricKind::Cosine,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitArg {
    Discern,
    #[value(name = "pp")]
    PlusPlus,
    Random,
}

impl InitArg {
    fn name(self) -> &'static str {
        match self {
            InitArg::Discern => "discern",
            InitArg::PlusPlus => "pp",
            InitArg::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EstimateMethod {
    Discern,
    Elbow,
    Silhouette,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    data: DataArgs,

    #[arg(long, value_enum, default_value_t = EstimateMethod::Discern)]
    method: EstimateMethod,

    /// Largest K considered. Elbow and silhouette default to min(n - 1, 3⌈√n⌉).
    #[arg(long)]
    k_max: Option<usize>,

    /// Seed for the K-Means++ runs of the elbow and silhouette scans.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// K-Means++ runs per K for the elbow and silhouette scans.
    #[arg(long, default_value_t = discern::kestimators::DEFAULT_RUNS_PER_K)]
    runs_per_k: usize,

    /// Write the curve or scan table here.
    #[arg(long)]
    out_dir: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("k_choice").required(true).args(["k", "estimate"])))]
struct ClusterArgs {
    #[command(flatten)]
    data: DataArgs,

    #[arg(long, value_enum, default_value_t = InitArg::Discern)]
    init: InitArg,

    /// Number of clusters.
    #[arg(long, value_parser = commands::parse_k)]
    k: Option<usize>,

    /// Estimate the number of clusters from the diversity curve.
    #[arg(long)]
    estimate: bool,

    /// Largest K considered by --estimate.
    #[arg(long)]
    k_max: Option<usize>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = discern::kmeans::DEFAULT_MAX_ITERATIONS)]
    max_iter: usize,

    #[arg(long, default_value = ".")]
    out_dir: PathBuf,

    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("k_choice").args(["k", "estimate"])))]
struct CompareArgs {
    #[command(flatten)]
    data: DataArgs,

    /// Initializations to compare.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "discern,pp,random")]
    methods: Vec<InitArg>,

    /// Number of clusters; the ground-truth class count when neither this
    /// nor --estimate is given.
    #[arg(long, value_parser = commands::parse_k)]
    k: Option<usize>,

    /// Use the K estimated from the diversity curve.
    #[arg(long)]
    estimate: bool,

    #[arg(long)]
    k_max: Option<usize>,

    /// Runs averaged for the stochastic methods.
    #[arg(long, default_value_t = 10)]
    repeats: usize,

    /// Seed of the first stochastic run; run r uses seed + r.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = discern::kmeans::DEFAULT_MAX_ITERATIONS)]
    max_iter: usize,

    /// Extra row from externally computed labels, as NAME=PATH.
    #[arg(long, value_parser = parse_external)]
    external: Vec<(String, PathBuf)>,

    /// Write compare.csv here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[command(flatten)]
    data: DataArgs,

    #[arg(long)]
    k_max: Option<usize>,

    /// Write curve.csv or curve.json here instead of printing it.
    #[arg(long)]
    out_dir: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    data: DataArgs,

    /// Labels to score, one per row (last column is used).
    #[arg(long)]
    predicted: PathBuf,

    #[arg(long)]
    out_dir: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

fn parse_external(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => Ok((name.to_string(), path.into())),
        _ => Err(format!("expected NAME=PATH, got '{s}'")),
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(discern::Error),
}

impl From<discern::Error> for CliError {
    fn from(e: discern::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_input() => 2,
            CliError::Core(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn run(cli: Cli) -> CliResult {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("thread count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::EstimateK(args) => commands::estimate_k(args),
        Command::Cluster(args) => commands::cluster(args),
        Command::Compare(args) => commands::compare(args),
        Command::Curve(args) => commands::curve(args),
        Command::Eval(args) => commands::eval(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
