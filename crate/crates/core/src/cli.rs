//! Command-line front end. `main.rs` only forwards to [`run`].
//!
//! Exit codes: 0 on success, 1 when the command fails at runtime, 2 for
//! usage errors.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::data::{self, ResultDocument};
use crate::error::{Error, Result};
use crate::metrics::adjusted_rand_index;
use crate::numerics::pca_fit_transform;
use crate::splits::{ksplits_run, KSplitsConfig};
use crate::suites::{self, Suite};

const BETA_HELP: &str = "\
Stop threshold on d/d_base, in (0, 1). Smaller values give more clusters. \
Dense data wants larger values, sparse data smaller ones. \
Presets: 0.01 (sparse, well separated), 0.1 (medium density or overlap), \
0.95 (very dense, e.g. PCA-reduced image data)";

#[derive(Debug, Parser)]
#[command(
    name = "ksplits",
    version,
    about = "k-splits clustering and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster a dataset with k-splits.
    Run(RunArgs),
    /// Best-of-N random-init k-means with a known k.
    Kmeans(KmeansArgs),
    /// Write a synthetic Gaussian mixture and its truth labels.
    Generate(GenerateArgs),
    /// Adjusted Rand index between two label files.
    Ari(AriArgs),
    /// Run a benchmark suite and write CSV.
    Bench(BenchArgs),
}

fn parse_beta(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!(
            "beta must lie in the open interval (0, 1), got {v}"
        ))
    }
}

fn parse_fraction(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("variance fraction must lie in (0, 1], got {v}"))
    }
}

fn parse_positive_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {v}"))
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Input matrix: one point per line, whitespace- or comma-separated.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.1, value_parser = parse_beta, help = BETA_HELP)]
    beta: f64,
    /// Number of clusters to start from (seeded k-means when > 1).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    initial_k: u64,
    /// Seed a final k-means with the discovered centroids.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    fine_tune: bool,
    /// Report the iteration with the highest mean density J_k. Turn off for
    /// very dense or heavily overlapping data.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    jk_select: bool,
    /// Reduce dimension with PCA to this explained-variance fraction first.
    #[arg(long, value_parser = parse_fraction)]
    pca_variance: Option<f64>,
    /// Ground-truth labels, one integer per line.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, default_value_t = 0, env = "KSPLITS_SEED")]
    seed: u64,
    /// Result document (JSON). Labels go to the same path with extension `.labels`.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Store the measured wall time in the result document. Off by default
    /// so reruns produce identical files.
    #[arg(long)]
    record_timing: bool,
}

#[derive(Debug, Args)]
struct KmeansArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Independent random restarts; the lowest-SSE run is kept.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    repeats: u64,
    #[arg(long, default_value_t = 0, env = "KSPLITS_SEED")]
    seed: u64,
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Arrangement {
    Grid,
    RandomMeans,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    clusters: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive_f64)]
    std: f64,
    #[arg(long, value_enum, default_value_t = Arrangement::RandomMeans)]
    arrangement: Arrangement,
    #[arg(long, default_value_t = 0, env = "KSPLITS_SEED")]
    seed: u64,
    /// Writes `<prefix>.txt` (points) and `<prefix>.labels` (truth).
    #[arg(long)]
    output_prefix: PathBuf,
}

#[derive(Debug, Args)]
struct AriArgs {
    first: PathBuf,
    second: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// table1-desk, sweep-n, sweep-c or sweep-dim.
    #[arg(long)]
    suite: Suite,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 0, env = "KSPLITS_SEED")]
    seed: u64,
    /// Directory with original benchmark files (a1.txt, s1.txt,
    /// dim032.txt, unbalance.txt and optional truth files); used by
    /// table1-desk instead of the generated analogues.
    #[arg(long)]
    data_dir: Option<PathBuf>,
}

/// One-line summary printed after `run` and `kmeans`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub dataset: String,
    pub algorithm: String,
    pub detected_k: usize,
    pub ari: Option<f64>,
    pub wall_time: f64,
    pub config: String,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dataset={} algorithm={} k={}",
            self.dataset, self.algorithm, self.detected_k
        )?;
        if let Some(ari) = self.ari {
            write!(f, " ari={ari:.6}")?;
        }
        write!(f, " time_s={:.4} {}", self.wall_time, self.config)
    }
}

/// Document written by `kmeans --output`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansDocument {
    pub k: usize,
    pub repeats: usize,
    pub best_seed: u64,
    pub sse: f64,
    pub iterations: usize,
    pub centroids: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

/// Labels written next to a result document.
pub fn labels_path(output: &Path) -> PathBuf {
    output.with_extension("labels")
}

fn dataset_name(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn load_truth(path: Option<&Path>, rows: usize) -> Result<Option<Vec<usize>>> {
    let Some(path) = path else { return Ok(None) };
    let truth = data::load_labels(path)?;
    if truth.len() != rows {
        return Err(Error::LengthMismatch {
            left: rows,
            right: truth.len(),
        });
    }
    Ok(Some(truth))
}

fn cmd_run(args: RunArgs, out: &mut dyn Write) -> Result<()> {
    let mut matrix = data::load_matrix_auto(&args.input)?;
    let truth = load_truth(args.truth.as_deref(), matrix.rows())?;

    let mut pca_note = String::new();
    if let Some(fraction) = args.pca_variance {
        let (projection, projected) = pca_fit_transform(&matrix, fraction)?;
        pca_note = format!(
            " pca_dims={}->{}",
            matrix.cols(),
            projection.components.len()
        );
        matrix = projected;
    }

    let config = KSplitsConfig {
        beta: args.beta,
        initial_k: args.initial_k as usize,
        use_jk_selection: args.jk_select,
        fine_tune: args.fine_tune,
        max_clusters: None,
        seed: args.seed,
    };
    let result = ksplits_run(&matrix, &config)?;
    let ari = truth
        .as_deref()
        .map(|t| adjusted_rand_index(t, &result.labels))
        .transpose()?;

    if let Some(output) = &args.output {
        let doc = ResultDocument::from_result(&result, args.record_timing);
        data::save_document(&doc, output)?;
        data::save_labels(labels_path(output), &result.labels)?;
    }

    let report = RunReport {
        dataset: dataset_name(&args.input),
        algorithm: if config.fine_tune {
            "k-splits-ft"
        } else {
            "k-splits"
        }
        .into(),
        detected_k: result.final_k,
        ari,
        wall_time: result.wall_time,
        config: format!(
            "beta={} initial_k={} jk_select={} fine_tune={} seed={} termination={:?}{pca_note}",
            config.beta,
            config.initial_k,
            config.use_jk_selection,
            config.fine_tune,
            config.seed,
            result.termination
        ),
    };
    writeln!(out, "{report}").map_err(|e| Error::io("<stdout>", e))
}

fn cmd_kmeans(args: KmeansArgs, out: &mut dyn Write) -> Result<()> {
    let matrix = data::load_matrix_auto(&args.input)?;
    let truth = load_truth(args.truth.as_deref(), matrix.rows())?;
    let k = args.k as usize;
    let repeats = args.repeats as usize;
    let (best, best_seed, time) = suites::kmeans_best_of(&matrix, k, repeats, args.seed)?;
    let ari = truth
        .as_deref()
        .map(|t| adjusted_rand_index(t, &best.labels))
        .transpose()?;

    if let Some(output) = &args.output {
        let doc = KMeansDocument {
            k,
            repeats,
            best_seed,
            sse: best.sse,
            iterations: best.iterations,
            centroids: best.centroids.clone(),
            labels: best.labels.clone(),
        };
        let mut json = serde_json::to_string_pretty(&doc)?;
        json.push('\n');
        write_file(output, &json)?;
        data::save_labels(labels_path(output), &best.labels)?;
    }

    let report = RunReport {
        dataset: dataset_name(&args.input),
        algorithm: format!("kmeans-{repeats}R"),
        detected_k: k,
        ari,
        wall_time: time,
        config: format!(
            "seed={} best_seed={best_seed} sse={:.6e}",
            args.seed, best.sse
        ),
    };
    writeln!(out, "{report}").map_err(|e| Error::io("<stdout>", e))
}

fn cmd_generate(args: GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let (n, c, dim) = (args.n as usize, args.clusters as usize, args.dim as usize);
    let ds = match args.arrangement {
        Arrangement::Grid => suites::grid_mixture(n, c, dim, args.std, args.seed)?,
        Arrangement::RandomMeans => suites::random_mixture(n, c, dim, args.std, args.seed)?,
    };
    let prefix = args.output_prefix.as_os_str().to_string_lossy();
    let points = PathBuf::from(format!("{prefix}.txt"));
    let labels = PathBuf::from(format!("{prefix}.labels"));
    data::save_matrix(&points, &ds.data)?;
    data::save_labels(&labels, ds.truth.as_deref().unwrap_or_default())?;
    writeln!(
        out,
        "wrote {} points in {dim} dimensions, {c} clusters: {} {}",
        n,
        points.display(),
        labels.display()
    )
    .map_err(|e| Error::io("<stdout>", e))
}

fn cmd_ari(args: AriArgs, out: &mut dyn Write) -> Result<()> {
    let a = data::load_labels(&args.first)?;
    let b = data::load_labels(&args.second)?;
    let ari = adjusted_rand_index(&a, &b)?;
    writeln!(out, "{ari:.6}").map_err(|e| Error::io("<stdout>", e))
}

fn cmd_bench(args: BenchArgs, out: &mut dyn Write) -> Result<()> {
    let start = Instant::now();
    let rows = suites::run_suite(args.suite, args.seed, args.data_dir.as_deref())?;
    let mut writer = csv::Writer::from_path(&args.output).map_err(csv_error(&args.output))?;
    for row in &rows {
        writer.serialize(row).map_err(csv_error(&args.output))?;
    }
    writer.flush().map_err(|e| Error::io(&args.output, e))?;
    writeln!(
        out,
        "wrote {} rows to {} in {:.2}s",
        rows.len(),
        args.output.display(),
        start.elapsed().as_secs_f64()
    )
    .map_err(|e| Error::io("<stdout>", e))
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::io(path, std::io::Error::other(e))
}

/// Parses `args` (program name first) and runs the command, writing normal
/// output to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    if let Command::Generate(g) = &cli.command {
        if g.clusters > g.n {
            use clap::CommandFactory;
            let e = Cli::command().error(
                clap::error::ErrorKind::ValueValidation,
                format!("--clusters {} exceeds --n {}", g.clusters, g.n),
            );
            let _ = write!(err, "{}", e.render());
            return 2;
        }
    }
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a, out),
        Command::Kmeans(a) => cmd_kmeans(a, out),
        Command::Generate(a) => cmd_generate(a, out),
        Command::Ari(a) => cmd_ari(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
