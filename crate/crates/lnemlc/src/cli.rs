//! Command-line interface.
//!
//! Exit codes: 0 success (every requested output written), 2 usage,
//! 3 I/O, 4 parse, 5 configuration, 6 schema mismatch, 1 other failures.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use lnemlc_core::dataset::MultiLabelDataset;
use lnemlc_core::label_graph::build_graph;
use lnemlc_core::line::LineConfig;
use lnemlc_core::node2vec::{generate_walks, Node2vecConfig};
use lnemlc_core::pipeline::{train_with, Backend, EmbedderChoice, LnemlcConfig, NetworkVariant, TrainedLnemlc};
use lnemlc_core::rng::derive_seed;
use lnemlc_core::stratify::iterative_stratification;
use serde::Serialize;
use thiserror::Error;

use crate::arff::{read_arff, save_arff, ArffError, ArffOptions};
use crate::bundle::{Bundle, BundleError};
use crate::config::{ConfigError, DimensionValue, FileConfig, Overrides};
use crate::experiment::{all_measures, evaluate_model, run_sweep, ConfigSummary, Mode, Report, ReportRow};
use crate::formats::{write_edge_list, write_embedding, write_folds, write_walks};
use crate::parallel::Parallel;
use crate::synth::{generate, SynthOptions};

pub const RUN_MANIFEST: &str = "run-manifest.json";

#[derive(Debug, Parser)]
#[command(name = "lnemlc", version, about = "Multi-label classification with label network embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model on an ARFF dataset and write a model bundle.
    Train(TrainArgs),
    /// Evaluate a bundle (or a freshly trained model) on a test set.
    Evaluate(EvaluateArgs),
    /// Cross-validate a grid of configurations.
    Sweep(SweepArgs),
    /// Write iterative-stratification folds as `row_index,fold`.
    Stratify(StratifyArgs),
    /// Write the label co-occurrence graph as an `s t w` edge list.
    Graph(GraphArgs),
    /// Train only the label embedding and write it as text.
    Embed(EmbedArgs),
    /// Generate a synthetic multi-label ARFF dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Training ARFF file.
    #[arg(long)]
    pub data: PathBuf,
    /// Number of label attributes.
    #[arg(long)]
    pub labels: usize,
    /// Labels are the first attributes instead of the last.
    #[arg(long)]
    pub labels_at_start: bool,
}

impl DataArgs {
    fn options(&self) -> ArffOptions {
        ArffOptions {
            label_count: self.labels,
            labels_at_end: !self.labels_at_start,
        }
    }
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    /// TOML configuration file, or `default`.
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Embedding dimension: `auto` or a power of two in 4..=4096.
    #[arg(long)]
    pub dim: Option<String>,
    /// line | node2vec | none
    #[arg(long)]
    pub embedder: Option<String>,
    /// LINE order: 1 | 2 | 1+2
    #[arg(long)]
    pub order: Option<String>,
    /// sum | mean | prod
    #[arg(long)]
    pub agg: Option<String>,
    /// Weight edges by co-occurrence frequency.
    #[arg(long)]
    pub weighted: bool,
    /// ridge | forest | none
    #[arg(long)]
    pub regressor: Option<String>,
}

impl ModelArgs {
    fn file_config(&self) -> Result<FileConfig, CliError> {
        let mut file = FileConfig::load(self.config.as_deref())?;
        file.apply(&Overrides {
            seed: self.seed,
            network: self.weighted.then(|| "weighted".to_string()),
            embedder: self.embedder.clone(),
            order: self.order.clone(),
            aggregation: self.agg.clone(),
            dimension: self.dim.clone().map(DimensionValue::Named),
            regressor: self.regressor.clone(),
        });
        Ok(file)
    }

    fn resolve(&self) -> Result<LnemlcConfig, CliError> {
        Ok(self.file_config()?.to_config()?)
    }
}

#[derive(Debug, Args)]
pub struct ExecArgs {
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Lock-free multi-threaded embedding SGD (not reproducible).
    #[arg(long)]
    pub hogwild: bool,
}

impl ExecArgs {
    fn backend(&self) -> Parallel {
        if self.threads > 0 {
            // a pool may already exist when several commands run in one process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(self.threads).build_global();
        }
        Parallel::new(self.hogwild)
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub exec: ExecArgs,
    /// Output directory for the bundle.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Model bundle directory; without it a model is trained from --data.
    #[arg(long)]
    pub model_dir: Option<PathBuf>,
    /// Training ARFF (when no bundle is given).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Test ARFF file.
    #[arg(long)]
    pub test: PathBuf,
    /// Number of label attributes (defaults to the bundle's).
    #[arg(long)]
    pub labels: Option<usize>,
    #[arg(long)]
    pub labels_at_start: bool,
    #[command(flatten)]
    pub model: ModelArgs,
    /// exact | regressed | both
    #[arg(long, default_value = "both")]
    pub mode: String,
    /// Add the no-embedding ML-kNN baseline rows.
    #[arg(long)]
    pub baseline: bool,
    /// Comma-separated measures (default: all).
    #[arg(long)]
    pub measures: Option<String>,
    #[command(flatten)]
    pub exec: ExecArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    /// exact | regressed | both
    #[arg(long, default_value = "exact")]
    pub mode: String,
    #[arg(long)]
    pub baseline: bool,
    #[arg(long)]
    pub measures: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StratifyArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub weighted: bool,
    /// Output edge-list file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub exec: ExecArgs,
    /// Also write the node2vec walk corpus here.
    #[arg(long)]
    pub walks: Option<PathBuf>,
    /// Output embedding file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub features: usize,
    #[arg(long)]
    pub labels: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write a test set of this many samples from the same topics.
    #[arg(long)]
    pub test_samples: Option<usize>,
    /// Training ARFF output.
    #[arg(long)]
    pub out: PathBuf,
    /// Test ARFF output (with --test-samples).
    #[arg(long)]
    pub test_out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Run(_) => 1,
            CliError::Io { .. } => 3,
            CliError::Parse(_) => 4,
            CliError::Config(_) => 5,
            CliError::Schema(_) => 6,
        }
    }
}

impl From<ArffError> for CliError {
    fn from(e: ArffError) -> Self {
        match e {
            ArffError::Io { path, source } => CliError::Io { path, source },
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { path, source } => CliError::Io { path, source },
            ConfigError::Parse { .. } => CliError::Parse(e.to_string()),
            ConfigError::Invalid(_) => CliError::Config(e.to_string()),
        }
    }
}

impl From<BundleError> for CliError {
    fn from(e: BundleError) -> Self {
        match e {
            BundleError::Io { path, source } => CliError::Io { path, source },
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<lnemlc_core::Error> for CliError {
    fn from(e: lnemlc_core::Error) -> Self {
        use lnemlc_core::Error as E;
        match e {
            E::InvalidConfig(_) | E::MissingRegressor | E::InfeasibleFolds { .. } => CliError::Config(e.to_string()),
            E::ShapeMismatch { .. } => CliError::Schema(e.to_string()),
            other => CliError::Run(other.to_string()),
        }
    }
}

/// Provenance of one command run, written next to its outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub config_path: Option<String>,
    pub config: Option<LnemlcConfig>,
    pub seed: Option<u64>,
    pub datasets: Vec<String>,
    pub output_dir: String,
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub started_unix_s: u64,
    pub wall_clock_ms: u64,
    pub timings_us: Vec<(String, u64)>,
}

struct Run {
    manifest: RunManifest,
    clock: Instant,
}

impl Run {
    fn new(command: &str, out_dir: &Path) -> Self {
        Run {
            manifest: RunManifest {
                command: command.into(),
                arguments: std::env::args().collect(),
                config_path: None,
                config: None,
                seed: None,
                datasets: Vec::new(),
                output_dir: out_dir.display().to_string(),
                outputs: Vec::new(),
                tool_version: env!("CARGO_PKG_VERSION").into(),
                started_unix_s: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
                wall_clock_ms: 0,
                timings_us: Vec::new(),
            },
            clock: Instant::now(),
        }
    }

    fn time(&mut self, step: &str, since: Instant) {
        self.manifest.timings_us.push((step.into(), since.elapsed().as_micros() as u64));
    }

    fn write(&mut self, path: &Path, contents: &str) -> Result<(), CliError> {
        std::fs::write(path, contents).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.manifest.outputs.push(path.display().to_string());
        Ok(())
    }

    fn finish(mut self, dir: &Path) -> Result<(), CliError> {
        self.manifest.wall_clock_ms = self.clock.elapsed().as_millis() as u64;
        let path = dir.join(RUN_MANIFEST);
        let text = serde_json::to_string_pretty(&self.manifest).expect("manifest serialises");
        std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })
}

/// Directory that holds the run manifest for a single-file output.
fn parent_dir(file: &Path) -> PathBuf {
    match file.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn load(path: &Path, options: ArffOptions, run: &mut Run) -> Result<MultiLabelDataset, CliError> {
    run.manifest.datasets.push(path.display().to_string());
    let start = Instant::now();
    let ds = read_arff(path, options)?;
    run.time(&format!("read {}", path.display()), start);
    Ok(ds)
}

fn parse_measures(list: &Option<String>) -> Vec<String> {
    match list {
        Some(s) => s.split(',').map(|m| m.trim().to_string()).filter(|m| !m.is_empty()).collect(),
        None => all_measures(),
    }
}

fn parse_modes(s: &str) -> Result<Vec<Mode>, CliError> {
    Mode::parse_list(s).ok_or_else(|| CliError::Config(format!("unknown mode '{s}' (use exact, regressed or both)")))
}

fn record_config(run: &mut Run, model: &ModelArgs, config: &LnemlcConfig) {
    run.manifest.config_path = model.config.clone();
    run.manifest.seed = Some(config.seed);
    run.manifest.config = Some(config.clone());
}

fn cmd_train(args: &TrainArgs) -> Result<(), CliError> {
    let config = args.model.resolve()?;
    let mut run = Run::new("train", &args.out);
    record_config(&mut run, &args.model, &config);
    let data = load(&args.data.data, args.data.options(), &mut run)?;
    let backend = args.exec.backend();
    let start = Instant::now();
    let model = train_with(&data, &config, &backend)?;
    run.time("train", start);
    for w in &model.metadata.warnings {
        eprintln!("warning: {w}");
    }
    let bundle = Bundle {
        model,
        feature_names: data.feature_names().to_vec(),
        label_names: data.label_names().to_vec(),
        run_manifest: Some(RUN_MANIFEST.into()),
    };
    create_dir(&args.out)?;
    let manifest = bundle.save(&args.out)?;
    run.manifest.outputs.push(manifest.display().to_string());
    run.finish(&args.out)
}

fn rows(index: usize, model: &TrainedLnemlc, test: &MultiLabelDataset, modes: &[Mode], backend: &dyn Backend) -> Result<Vec<ReportRow>, CliError> {
    let summary = ConfigSummary::new(&model.config, model.metadata.n_labels);
    Ok(evaluate_model(model, test, modes, backend)?
        .into_iter()
        .map(|(mode, scores, predict_us)| ReportRow {
            config: index,
            summary: summary.clone(),
            mode,
            fold: None,
            train_us: None,
            predict_us,
            scores,
        })
        .collect())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    run_manifest: &'a str,
    #[serde(flatten)]
    report: &'a Report,
}

fn write_reports(run: &mut Run, dir: &Path, stem: &str, report: &Report, long: bool) -> Result<(), CliError> {
    let csv = if long { report.to_long_csv() } else { report.to_wide_csv() };
    run.write(&dir.join(format!("{stem}.csv")), &csv)?;
    let json = serde_json::to_string_pretty(&JsonReport {
        run_manifest: RUN_MANIFEST,
        report,
    })
    .expect("report serialises");
    run.write(&dir.join(format!("{stem}.json")), &json)
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let modes = parse_modes(&args.mode)?;
    let measures = parse_measures(&args.measures);
    for m in &measures {
        if !all_measures().contains(m) {
            return Err(CliError::Config(format!("unknown measure '{m}'")));
        }
    }
    let mut run = Run::new("evaluate", &args.out);
    let backend = args.exec.backend();
    let (model, labels) = match (&args.model_dir, &args.data) {
        (Some(dir), _) => {
            run.manifest.datasets.push(dir.display().to_string());
            let bundle = Bundle::load(dir)?;
            let l = bundle.model.metadata.n_labels;
            if args.labels.is_some_and(|given| given != l) {
                return Err(CliError::Schema(format!("--labels {} but the bundle has {l} labels", args.labels.unwrap_or(0))));
            }
            run.manifest.seed = Some(bundle.model.config.seed);
            run.manifest.config = Some(bundle.model.config.clone());
            (bundle.model, l)
        }
        (None, Some(data)) => {
            let l = args.labels.ok_or_else(|| CliError::Config("--labels is required with --data".into()))?;
            let config = args.model.resolve()?;
            record_config(&mut run, &args.model, &config);
            let options = ArffOptions {
                label_count: l,
                labels_at_end: !args.labels_at_start,
            };
            let train_set = load(data, options, &mut run)?;
            let start = Instant::now();
            let model = train_with(&train_set, &config, &backend)?;
            run.time("train", start);
            (model, l)
        }
        (None, None) => return Err(CliError::Config("either --model-dir or --data is required".into())),
    };
    if modes.contains(&Mode::Regressed) && !model.is_baseline() && model.regressor.is_none() {
        return Err(CliError::Config("regressed mode requested but the model has no regressor".into()));
    }
    let test = load(
        &args.test,
        ArffOptions {
            label_count: labels,
            labels_at_end: !args.labels_at_start,
        },
        &mut run,
    )?;
    if test.n_features() != model.metadata.n_features {
        return Err(CliError::Schema(format!(
            "test set has {} features, model expects {}",
            test.n_features(),
            model.metadata.n_features
        )));
    }

    let start = Instant::now();
    let mut configs = Vec::new();
    let mut all_rows = Vec::new();
    if args.baseline && !model.is_baseline() {
        let base = model.baseline_with(&backend)?;
        all_rows.extend(rows(0, &base, &test, &modes, &backend)?);
        configs.push(base.config);
    }
    all_rows.extend(rows(configs.len(), &model, &test, &modes, &backend)?);
    configs.push(model.config.clone());
    run.time("evaluate", start);

    let report = Report {
        measures,
        configs,
        rows: all_rows,
    };
    create_dir(&args.out)?;
    write_reports(&mut run, &args.out, "report", &report, false)?;
    run.finish(&args.out)
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let modes = parse_modes(&args.mode)?;
    let measures = parse_measures(&args.measures);
    let file = args.model.file_config()?;
    let configs = file.grid()?;
    if args.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(args.threads).build_global();
    }
    let mut run = Run::new("sweep", &args.out);
    run.manifest.config_path = args.model.config.clone();
    run.manifest.seed = configs.first().map(|c| c.seed);
    let data = load(&args.data.data, args.data.options(), &mut run)?;
    if args.folds < 2 || args.folds > data.n_samples() {
        return Err(CliError::Config(format!(
            "{} folds are infeasible for {} samples",
            args.folds,
            data.n_samples()
        )));
    }
    let fold_seed = derive_seed(run.manifest.seed.unwrap_or(0), 4);
    let start = Instant::now();
    let report = run_sweep(&data, &configs, args.baseline, args.folds, fold_seed, &modes, &measures)?;
    run.time("sweep", start);
    create_dir(&args.out)?;
    let folds = iterative_stratification(data.labels(), args.folds, fold_seed)?;
    run.write(&args.out.join("folds.csv"), &write_folds(&folds))?;
    write_reports(&mut run, &args.out, "sweep", &report, true)?;
    run.finish(&args.out)
}

fn cmd_stratify(args: &StratifyArgs) -> Result<(), CliError> {
    let dir = parent_dir(&args.out);
    let mut run = Run::new("stratify", &dir);
    run.manifest.seed = Some(args.seed);
    let data = load(&args.data.data, args.data.options(), &mut run)?;
    let folds = iterative_stratification(data.labels(), args.folds, args.seed)?;
    create_dir(&dir)?;
    run.write(&args.out, &write_folds(&folds))?;
    run.finish(&dir)
}

fn cmd_graph(args: &GraphArgs) -> Result<(), CliError> {
    let dir = parent_dir(&args.out);
    let mut run = Run::new("graph", &dir);
    let data = load(&args.data.data, args.data.options(), &mut run)?;
    let graph = build_graph(data.labels(), args.weighted);
    create_dir(&dir)?;
    run.write(&args.out, &write_edge_list(&graph))?;
    run.finish(&dir)
}

fn cmd_embed(args: &EmbedArgs) -> Result<(), CliError> {
    let config = args.model.resolve()?;
    let dir = parent_dir(&args.out);
    let mut run = Run::new("embed", &dir);
    record_config(&mut run, &args.model, &config);
    let data = load(&args.data.data, args.data.options(), &mut run)?;
    let graph = build_graph(data.labels(), config.network == NetworkVariant::Weighted);
    let d = config.resolve_dimension(data.n_labels());
    let backend = args.exec.backend();
    let start = Instant::now();
    let table = match &config.embedder {
        EmbedderChoice::None => return Err(CliError::Config("embed needs an embedder".into())),
        EmbedderChoice::Line {
            order,
            negative_ratio,
            sample_budget,
            learning_rate,
        } => backend.train_line(
            &graph,
            &LineConfig {
                dimension: d,
                order: *order,
                negative_ratio: *negative_ratio,
                sample_budget: *sample_budget,
                initial_learning_rate: *learning_rate,
                seed: derive_seed(config.seed, 1),
            },
        )?,
        EmbedderChoice::Node2vec {
            walks_per_node,
            max_walk_length,
            return_p,
            inout_q,
            window_size,
            negative_ratio,
            epochs,
            learning_rate,
        } => {
            let nc = Node2vecConfig {
                dimension: d,
                walks_per_node: *walks_per_node,
                max_walk_length: *max_walk_length,
                return_p: *return_p,
                inout_q: *inout_q,
                window_size: *window_size,
                negative_ratio: *negative_ratio,
                epochs: *epochs,
                learning_rate: *learning_rate,
                seed: derive_seed(config.seed, 2),
            };
            let max_card = data.labels().max_cardinality();
            if let Some(path) = &args.walks {
                let corpus = generate_walks(&graph, &nc, nc.walk_length(max_card));
                run.write(path, &write_walks(&corpus, data.label_names()))?;
            }
            backend.train_node2vec(&graph, &nc, max_card)?
        }
    };
    run.time("embed", start);
    create_dir(&dir)?;
    run.write(&args.out, &write_embedding(&table, data.label_names()))?;
    run.finish(&dir)
}

fn cmd_synth(args: &SynthArgs) -> Result<(), CliError> {
    let dir = parent_dir(&args.out);
    let mut run = Run::new("synth", &dir);
    run.manifest.seed = Some(args.seed);
    let total = args.samples + args.test_samples.unwrap_or(0);
    let all = generate(&SynthOptions::new(total, args.features, args.labels), args.seed)?;
    let train: Vec<usize> = (0..args.samples).collect();
    create_dir(&dir)?;
    let write = |run: &mut Run, ds: &MultiLabelDataset, path: &Path| -> Result<(), CliError> {
        save_arff(ds, "synthetic", path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        run.manifest.outputs.push(path.display().to_string());
        Ok(())
    };
    write(&mut run, &all.select(&train)?, &args.out)?;
    if let Some(n) = args.test_samples {
        let path = args
            .test_out
            .as_ref()
            .ok_or_else(|| CliError::Config("--test-out is required with --test-samples".into()))?;
        let test: Vec<usize> = (args.samples..args.samples + n).collect();
        write(&mut run, &all.select(&test)?, path)?;
    }
    run.finish(&dir)
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Stratify(a) => cmd_stratify(a),
        Command::Graph(a) => cmd_graph(a),
        Command::Embed(a) => cmd_embed(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
