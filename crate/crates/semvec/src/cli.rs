//! Command-line front end: `train`, `query`, `eval`, `sweep`, `lcs`.
//!
//! Flag names mirror the training-parameter vocabulary (`--dim` for
//! vector size, `--window`, `--min-count`, `--algo`) so experiment
//! writeups stay legible. The `semvec` binary is a thin dispatcher over
//! the `cmd_*` functions here.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::cascade::{
    lcs_similarity, longest_common_substring, CascadeError, SimilarityCascade,
};
use crate::corpus::{CorpusConfig, CorpusError};
use crate::eval::{evaluate, load_dataset, DatasetKind, EvalError, PairDataset};
use crate::model::{EmbeddingModel, ModelError, ModelFormat};
use crate::trainer::{train, train_with_stats, Algorithm, TrainError, TrainingConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cascade(#[from] CascadeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Parser, Debug)]
#[command(
    name = "semvec",
    version,
    about = "Train word embeddings and score word-pair similarity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Train a CBOW or skip-gram model on a tokenized corpus
    Train(TrainArgs),
    /// Score a word pair or list nearest neighbors
    Query(QueryArgs),
    /// Evaluate a model or cascade on a word-pair dataset
    Eval(EvalArgs),
    /// Train across a dim × window grid and emit a CSV of scores
    Sweep(SweepArgs),
    /// Score two words with the longest-common-substring heuristic
    Lcs(LcsArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum AlgoFlag {
    Cbow,
    Sg,
}

impl From<AlgoFlag> for Algorithm {
    fn from(flag: AlgoFlag) -> Algorithm {
        match flag {
            AlgoFlag::Cbow => Algorithm::Cbow,
            AlgoFlag::Sg => Algorithm::SkipGram,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum KindFlag {
    Graded,
    Binary,
}

impl From<KindFlag> for DatasetKind {
    fn from(flag: KindFlag) -> DatasetKind {
        match flag {
            KindFlag::Graded => DatasetKind::Graded,
            KindFlag::Binary => DatasetKind::Binary,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum FormatFlag {
    Binary,
    Text,
}

impl From<FormatFlag> for ModelFormat {
    fn from(flag: FormatFlag) -> ModelFormat {
        match flag {
            FormatFlag::Binary => ModelFormat::Binary,
            FormatFlag::Text => ModelFormat::Text,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct CorpusFlags {
    /// Corpus file, one sentence per line (repeatable)
    #[arg(long = "corpus", value_name = "PATH", required = true)]
    pub corpus: Vec<PathBuf>,
    /// Stop-word file, one word per line
    #[arg(long, value_name = "PATH")]
    pub stopwords: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TrainingFlags {
    /// Training algorithm
    #[arg(long, value_enum, default_value_t = AlgoFlag::Cbow)]
    pub algo: AlgoFlag,
    /// Minimum corpus frequency for a word to be trained
    #[arg(long = "min-count", value_name = "N", default_value_t = 5,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub min_count: u64,
    /// Negative samples per positive pair
    #[arg(long = "negative", value_name = "N", default_value_t = 5,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub negative: u64,
    /// Passes over the corpus
    #[arg(long, value_name = "N", default_value_t = 5,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub epochs: u64,
    /// Initial learning rate
    #[arg(long, value_name = "F", default_value_t = 0.025)]
    pub alpha: f64,
    /// Subsampling threshold; 0 disables subsampling
    #[arg(long, value_name = "F", default_value_t = 0.0)]
    pub sample: f64,
    /// RNG seed
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub seed: u64,
    /// Training threads; results are reproducible only with 1
    #[arg(long, value_name = "N", default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    /// Always use the full window instead of sampling its width
    #[arg(long = "fixed-window")]
    pub fixed_window: bool,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[command(flatten)]
    pub corpus: CorpusFlags,
    #[command(flatten)]
    pub training: TrainingFlags,
    /// Vector size
    #[arg(long, value_name = "N", default_value_t = 100,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub dim: u64,
    /// Context width on each side of a position
    #[arg(long, value_name = "N", default_value_t = 5,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub window: u64,
    /// Output model path
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// On-disk model layout
    #[arg(long, value_enum, default_value_t = FormatFlag::Binary)]
    pub format: FormatFlag,
}

#[derive(Args, Debug)]
#[command(group(
    clap::ArgGroup::new("scorer").required(true).multiple(false).args(["model", "cascade"])
))]
#[command(group(
    clap::ArgGroup::new("mode").required(true).multiple(false).args(["pair", "nearest"])
))]
pub struct QueryArgs {
    /// Model file in priority order (repeatable)
    #[arg(long = "model", value_name = "PATH")]
    pub model: Vec<PathBuf>,
    /// Cascade config file: model paths plus an optional final "lcs" line
    #[arg(long, value_name = "PATH")]
    pub cascade: Option<PathBuf>,
    /// Score one word pair
    #[arg(long, num_args = 2, value_names = ["W1", "W2"])]
    pub pair: Option<Vec<String>>,
    /// List neighbors of one word
    #[arg(long, value_name = "WORD")]
    pub nearest: Option<String>,
    /// Neighbor count for --nearest
    #[arg(long, value_name = "N", default_value_t = 10,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
}

#[derive(Args, Debug)]
#[command(group(
    clap::ArgGroup::new("scorer").required(true).multiple(false).args(["model", "cascade"])
))]
pub struct EvalArgs {
    /// Model file in priority order (repeatable)
    #[arg(long = "model", value_name = "PATH")]
    pub model: Vec<PathBuf>,
    /// Cascade config file
    #[arg(long, value_name = "PATH")]
    pub cascade: Option<PathBuf>,
    /// Dataset TSV: word1<TAB>word2<TAB>gold
    #[arg(long, value_name = "PATH")]
    pub dataset: PathBuf,
    /// Gold-value kind of the dataset
    #[arg(long, value_enum)]
    pub kind: KindFlag,
    /// Also write a single-line key=value record here
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub corpus: CorpusFlags,
    #[command(flatten)]
    pub training: TrainingFlags,
    /// Vector-size grid point (repeatable); the default grid steps by 48
    /// so every size stays a multiple of 4
    #[arg(long = "dim", value_name = "N", default_values_t = vec![52u64, 100, 148, 196],
          value_parser = clap::value_parser!(u64).range(1..))]
    pub dims: Vec<u64>,
    /// Window grid point (repeatable)
    #[arg(long = "window", value_name = "N", default_values_t = vec![1u64, 2, 5, 10],
          value_parser = clap::value_parser!(u64).range(1..))]
    pub windows: Vec<u64>,
    /// Evaluation dataset (repeatable)
    #[arg(long = "dataset", value_name = "PATH", required = true)]
    pub datasets: Vec<PathBuf>,
    /// Dataset kind: once per dataset, or once for all
    #[arg(long = "kind", value_enum, required = true)]
    pub kinds: Vec<KindFlag>,
    /// Output CSV path
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct LcsArgs {
    pub word1: String,
    pub word2: String,
}

/// Grid description for [`run_sweep`].
pub struct SweepSpec {
    pub dims: Vec<usize>,
    pub windows: Vec<usize>,
    pub fixed: TrainingConfig,
    pub datasets: Vec<(PathBuf, DatasetKind)>,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Train(args) => cmd_train(&args),
        Command::Query(args) => cmd_query(&args),
        Command::Eval(args) => cmd_eval(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Lcs(args) => cmd_lcs(&args),
    }
}

fn corpus_config(flags: &CorpusFlags) -> Result<CorpusConfig, CliError> {
    let mut config = CorpusConfig::new(flags.corpus.clone())?;
    if let Some(path) = &flags.stopwords {
        config = config.with_stopwords(path);
    }
    Ok(config)
}

fn training_config(flags: &TrainingFlags, dim: u64, window: u64) -> TrainingConfig {
    TrainingConfig {
        algorithm: flags.algo.into(),
        dim: dim as usize,
        window: window as usize,
        min_count: flags.min_count,
        negatives: flags.negative as usize,
        epochs: flags.epochs as usize,
        alpha0: flags.alpha,
        alpha_min: flags.alpha * 1e-4,
        sample: flags.sample,
        seed: flags.seed,
        workers: flags.workers as usize,
        dynamic_window: !flags.fixed_window,
    }
}

fn load_scorer(
    models: &[PathBuf],
    cascade_path: Option<&Path>,
) -> Result<SimilarityCascade, CliError> {
    if let Some(path) = cascade_path {
        return Ok(SimilarityCascade::from_config_file(path)?);
    }
    let mut loaded = Vec::with_capacity(models.len());
    for path in models {
        loaded.push(Arc::new(EmbeddingModel::load(path)?));
    }
    Ok(SimilarityCascade::new(loaded, false)?)
}

pub fn cmd_train(args: &TrainArgs) -> Result<(), CliError> {
    let corpus = corpus_config(&args.corpus)?;
    let config = training_config(&args.training, args.dim, args.window);
    let (model, stats) = train_with_stats(&corpus, &config)?;
    model.save(&args.out, args.format.into())?;
    println!(
        "wrote {} ({} words, dim {})",
        args.out.display(),
        model.len(),
        model.dim()
    );
    println!(
        "throughput: {:.0} words/s over {} tokens",
        stats.words_per_sec, stats.trained_words
    );
    Ok(())
}

pub fn cmd_query(args: &QueryArgs) -> Result<(), CliError> {
    let cascade = load_scorer(&args.model, args.cascade.as_deref())?;
    if let Some(pair) = &args.pair {
        let verdict = cascade.similarity(&pair[0], &pair[1]);
        println!("score={:.6} source={}", verdict.score, verdict.source);
        return Ok(());
    }
    let word = args
        .nearest
        .as_ref()
        .expect("clap guarantees one query mode");
    // Nearest-neighbor listing follows the cascade rule: the first
    // model that knows the word answers.
    let model = cascade
        .models()
        .iter()
        .find(|m| m.contains(word))
        .ok_or_else(|| CliError::Model(ModelError::UnknownWord(word.clone())))?;
    for (neighbor, score) in model.nearest(word, args.k as usize)? {
        println!("{neighbor}\t{score:.6}");
    }
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let cascade = load_scorer(&args.model, args.cascade.as_deref())?;
    let dataset = load_dataset(&args.dataset, args.kind.into())?;
    let report = evaluate(&cascade, &dataset)?;
    println!("{report}");
    if let Some(path) = &args.report {
        report.write_record(path)?;
    }
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let corpus = corpus_config(&args.corpus)?;
    let kinds: Vec<DatasetKind> = if args.kinds.len() == 1 {
        vec![args.kinds[0].into(); args.datasets.len()]
    } else if args.kinds.len() == args.datasets.len() {
        args.kinds.iter().map(|&k| k.into()).collect()
    } else {
        return Err(CliError::Usage(
            "--kind must be given once, or once per --dataset".into(),
        ));
    };
    let spec = SweepSpec {
        dims: args.dims.iter().map(|&d| d as usize).collect(),
        windows: args.windows.iter().map(|&w| w as usize).collect(),
        fixed: training_config(&args.training, 100, 5),
        datasets: args
            .datasets
            .iter()
            .cloned()
            .zip(kinds)
            .collect(),
    };
    run_sweep(&corpus, &spec, &args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

/// Trains every (dim, window) grid point, evaluates it on every dataset,
/// and appends one CSV row per (grid point, dataset). A failing grid
/// point becomes an error-marker row and the sweep continues.
pub fn run_sweep(corpus: &CorpusConfig, spec: &SweepSpec, out: &Path) -> Result<(), CliError> {
    if spec.dims.is_empty() || spec.windows.is_empty() || spec.datasets.is_empty() {
        return Err(CliError::Usage(
            "sweep needs at least one dim, window, and dataset".into(),
        ));
    }

    let mut dims = spec.dims.clone();
    dims.sort_unstable();
    dims.dedup();
    let mut windows = spec.windows.clone();
    windows.sort_unstable();
    windows.dedup();
    let mut datasets: Vec<(PathBuf, DatasetKind)> = spec.datasets.clone();
    datasets.sort_by(|(a, _), (b, _)| a.cmp(b));

    let loaded: Vec<(PathBuf, PairDataset)> = datasets
        .into_iter()
        .map(|(path, kind)| load_dataset(&path, kind).map(|ds| (path, ds)))
        .collect::<Result<_, _>>()?;

    let io_err = |source| CliError::Io {
        path: out.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(out).map_err(io_err)?;
    let mut csv = std::io::BufWriter::new(file);
    writeln!(csv, "dim,window,dataset,metric,value,train_seconds").map_err(io_err)?;

    for &dim in &dims {
        for &window in &windows {
            let mut config = spec.fixed.clone();
            config.dim = dim;
            config.window = window;
            let started = Instant::now();
            let outcome = train(corpus, &config);
            let seconds = started.elapsed().as_secs_f64();

            match outcome {
                Ok(model) => {
                    let cascade = SimilarityCascade::from_model(model);
                    for (path, dataset) in &loaded {
                        let row = match evaluate(&cascade, dataset) {
                            Ok(report) => format!(
                                "{dim},{window},{},{},{:.6},{seconds:.3}",
                                csv_field(&path.display().to_string()),
                                report.metric,
                                report.value
                            ),
                            Err(e) => format!(
                                "{dim},{window},{},error,{},{seconds:.3}",
                                csv_field(&path.display().to_string()),
                                csv_field(&e.to_string())
                            ),
                        };
                        writeln!(csv, "{row}").map_err(io_err)?;
                    }
                }
                Err(e) => {
                    for (path, _) in &loaded {
                        writeln!(
                            csv,
                            "{dim},{window},{},error,{},{seconds:.3}",
                            csv_field(&path.display().to_string()),
                            csv_field(&e.to_string())
                        )
                        .map_err(io_err)?;
                    }
                }
            }
        }
    }
    csv.flush().map_err(io_err)
}

pub fn cmd_lcs(args: &LcsArgs) -> Result<(), CliError> {
    let score = lcs_similarity(&args.word1, &args.word2);
    if score > 0.0 {
        let substring = longest_common_substring(&args.word1, &args.word2);
        println!("score={score:.1} substring={substring}");
    } else {
        println!("score=0.0 (no common substring longer than 3 characters)");
    }
    Ok(())
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}
