//! Experiment runs and their reports.
//!
//! Wide CSV (`evaluate`): one row per configuration and mode, columns
//!
//! | column | meaning |
//! |---|---|
//! | `config` | index of the configuration in the run (0 is the no-embedding baseline) |
//! | `network` | `U` or `W` |
//! | `embedder` | `none`, `line` or `node2vec` |
//! | `order` | LINE order `1`, `2`, `1+2`; empty otherwise |
//! | `aggregation` | `sum`, `mean` or `prod` |
//! | `dimension` | embedding dimension, 0 for the baseline |
//! | `regressor` | `forest`, `ridge` or `none` |
//! | `scaling` | block scaling mode |
//! | `k` | neighbours used by ML-kNN |
//! | `seed` | pipeline seed |
//! | `mode` | `exact` or `regressed` |
//! | `fold` | held-out fold, empty for a train/test run |
//! | `train_us`, `predict_us` | wall-clock microseconds |
//! | one column per measure | value in `[0, 1]` |
//!
//! Long CSV (`sweep`): the same leading columns up to `predict_us`, then
//! `measure,value`, one row per (configuration, mode, fold, measure).

use std::fmt::Write as _;

use lnemlc_core::dataset::{split, MultiLabelDataset};
use lnemlc_core::metrics::{evaluate, EvaluationReport};
use lnemlc_core::pipeline::{train_with, Backend, EmbedderChoice, LnemlcConfig, RegressorChoice, ScalingMode, TrainedLnemlc};
use lnemlc_core::stratify::iterative_stratification;
use lnemlc_core::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::parallel::Timed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Regressed,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Regressed => "regressed",
        }
    }

    /// `exact`, `regressed` or `both`.
    pub fn parse_list(s: &str) -> Option<Vec<Mode>> {
        match s {
            "exact" => Some(vec![Mode::Exact]),
            "regressed" => Some(vec![Mode::Regressed]),
            "both" => Some(vec![Mode::Exact, Mode::Regressed]),
            _ => None,
        }
    }
}

/// Flat description of a configuration for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub network: String,
    pub embedder: String,
    pub order: String,
    pub aggregation: String,
    pub dimension: usize,
    pub regressor: String,
    pub scaling: String,
    pub k: usize,
    pub seed: u64,
}

impl ConfigSummary {
    pub fn new(config: &LnemlcConfig, labels: usize) -> Self {
        let baseline = config.is_baseline();
        ConfigSummary {
            network: if baseline { String::new() } else { config.network.as_str().into() },
            embedder: config.embedder.name().into(),
            order: match &config.embedder {
                EmbedderChoice::Line { order, .. } => order.as_str().into(),
                _ => String::new(),
            },
            aggregation: if baseline { String::new() } else { config.aggregation.as_str().into() },
            dimension: config.resolve_dimension(labels),
            regressor: config.regressor.name().into(),
            scaling: match config.scaling {
                ScalingMode::None => "none",
                ScalingMode::StandardizeBoth => "standardize-both",
                ScalingMode::StandardizeEmbedding => "standardize-embedding",
            }
            .into(),
            k: config.k,
            seed: config.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub config: usize,
    #[serde(flatten)]
    pub summary: ConfigSummary,
    pub mode: Mode,
    pub fold: Option<usize>,
    pub train_us: Option<u64>,
    pub predict_us: Option<u64>,
    pub scores: EvaluationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub measures: Vec<String>,
    pub configs: Vec<LnemlcConfig>,
    pub rows: Vec<ReportRow>,
}

fn check_measures(measures: &[String]) -> Result<()> {
    for m in measures {
        if !EvaluationReport::MEASURES.contains(&m.as_str()) {
            return Err(Error::InvalidConfig(format!(
                "unknown measure '{m}' (known: {})",
                EvaluationReport::MEASURES.join(", ")
            )));
        }
    }
    Ok(())
}

pub fn all_measures() -> Vec<String> {
    EvaluationReport::MEASURES.iter().map(|s| s.to_string()).collect()
}

/// Puts the no-embedding control first unless one is already present.
pub fn with_baseline(configs: &[LnemlcConfig]) -> Vec<LnemlcConfig> {
    if configs.iter().any(|c| c.is_baseline()) {
        return configs.to_vec();
    }
    let base = configs.first().cloned().unwrap_or_default().baseline();
    std::iter::once(base).chain(configs.iter().cloned()).collect()
}

fn elapsed<B: Backend + ?Sized>(backend: &B, from: Option<u64>) -> Option<u64> {
    Some(backend.now_micros()?.saturating_sub(from?))
}

/// Evaluates a trained model on `test` in each mode.
pub fn evaluate_model<B: Backend + ?Sized>(
    model: &TrainedLnemlc,
    test: &MultiLabelDataset,
    modes: &[Mode],
    backend: &B,
) -> Result<Vec<(Mode, EvaluationReport, Option<u64>)>> {
    modes
        .iter()
        .map(|&mode| {
            let start = backend.now_micros();
            let pred = match mode {
                Mode::Exact => model.predict_exact_with(test.features(), test.labels(), backend)?,
                Mode::Regressed => model.predict_with(test.features(), backend)?,
            };
            let took = elapsed(backend, start);
            Ok((mode, evaluate(test.labels(), &pred.assignments)?, took))
        })
        .collect()
}

fn rows_for<B: Backend + ?Sized>(
    index: usize,
    config: &LnemlcConfig,
    train_set: &MultiLabelDataset,
    test_set: &MultiLabelDataset,
    modes: &[Mode],
    fold: Option<usize>,
    backend: &B,
) -> Result<Vec<ReportRow>> {
    let start = backend.now_micros();
    let model = train_with(train_set, config, backend)?;
    let train_us = elapsed(backend, start);
    let summary = ConfigSummary::new(config, train_set.n_labels());
    Ok(evaluate_model(&model, test_set, modes, backend)?
        .into_iter()
        .map(|(mode, scores, predict_us)| ReportRow {
            config: index,
            summary: summary.clone(),
            mode,
            fold,
            train_us,
            predict_us,
            scores,
        })
        .collect())
}

fn check_modes(configs: &[LnemlcConfig], modes: &[Mode]) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::InvalidConfig("no evaluation mode selected".into()));
    }
    if modes.contains(&Mode::Regressed) {
        if let Some(c) = configs.iter().find(|c| !c.is_baseline() && c.regressor == RegressorChoice::None) {
            return Err(Error::InvalidConfig(format!(
                "regressed mode needs a regressor, but a {} configuration has none",
                c.embedder.name()
            )));
        }
    }
    Ok(())
}

/// Trains every configuration (plus the baseline) on `train_set` and
/// evaluates it on `test_set`; `|configs| × |modes|` rows.
pub fn run_experiment<B: Backend + ?Sized>(
    train_set: &MultiLabelDataset,
    test_set: &MultiLabelDataset,
    configs: &[LnemlcConfig],
    modes: &[Mode],
    measures: &[String],
    backend: &B,
) -> Result<Report> {
    check_measures(measures)?;
    train_set.check_schema(test_set)?;
    let configs = with_baseline(configs);
    check_modes(&configs, modes)?;
    let mut rows = Vec::new();
    for (i, config) in configs.iter().enumerate() {
        rows.extend(rows_for(i, config, train_set, test_set, modes, None, backend)?);
    }
    Ok(Report {
        measures: measures.to_vec(),
        configs,
        rows,
    })
}

/// k-fold cross-validation over iteratively stratified folds. Pairs of
/// (configuration, fold) run concurrently; each is deterministic.
pub fn run_sweep(
    data: &MultiLabelDataset,
    configs: &[LnemlcConfig],
    include_baseline: bool,
    folds: usize,
    fold_seed: u64,
    modes: &[Mode],
    measures: &[String],
) -> Result<Report> {
    check_measures(measures)?;
    let configs = if include_baseline { with_baseline(configs) } else { configs.to_vec() };
    check_modes(&configs, modes)?;
    let assignment = iterative_stratification(data.labels(), folds, fold_seed)?;
    let splits = (0..folds).map(|f| split(data, &assignment, f)).collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..configs.len()).flat_map(|c| (0..folds).map(move |f| (c, f))).collect();
    let chunks = pairs
        .par_iter()
        .map(|&(c, f)| {
            let (train_set, test_set) = &splits[f];
            rows_for(c, &configs[c], train_set, test_set, modes, Some(f), &Timed::default())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        measures: measures.to_vec(),
        configs,
        rows: chunks.into_iter().flatten().collect(),
    })
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

const LEADING: &str = "config,network,embedder,order,aggregation,dimension,regressor,scaling,k,seed,mode,fold,train_us,predict_us";

fn leading(row: &ReportRow) -> String {
    let s = &row.summary;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        row.config,
        s.network,
        s.embedder,
        s.order,
        s.aggregation,
        s.dimension,
        s.regressor,
        s.scaling,
        s.k,
        s.seed,
        row.mode.as_str(),
        opt(&row.fold),
        opt(&row.train_us),
        opt(&row.predict_us)
    )
}

fn measure_value(scores: &EvaluationReport, name: &str) -> f64 {
    let i = EvaluationReport::MEASURES.iter().position(|m| *m == name).expect("validated measure");
    scores.values()[i]
}

impl Report {
    pub fn to_wide_csv(&self) -> String {
        let mut out = format!("{LEADING},{}\n", self.measures.join(","));
        for row in &self.rows {
            out.push_str(&leading(row));
            for m in &self.measures {
                let _ = write!(out, ",{}", measure_value(&row.scores, m));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_long_csv(&self) -> String {
        let mut out = format!("{LEADING},measure,value\n");
        for row in &self.rows {
            let lead = leading(row);
            for m in &self.measures {
                let _ = writeln!(out, "{lead},{m},{}", measure_value(&row.scores, m));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn find(&self, config: usize, mode: Mode) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(move |r| r.config == config && r.mode == mode)
    }
}
