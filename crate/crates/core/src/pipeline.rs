//! Training and prediction for the full scheme:
//! label graph → label embedding → per-sample aggregation → embedding
//! regressor → ML-kNN on `[features | embedding]`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate, AggregationKind};
use crate::dataset::MultiLabelDataset;
use crate::error::{Error, Result};
use crate::label_graph::{build_graph, LabelGraph};
use crate::line::{self, validate_grid_dimension, EmbeddingTable, LineConfig, LineOrder};
use crate::matrix::{LabelMatrix, Matrix};
use crate::mlknn::{MlknnModel, MlknnPrediction, DEFAULT_K, DEFAULT_SMOOTHING};
use crate::node2vec::{self, Node2vecConfig};
use crate::regress::{self, fit_ridge, ForestConfig, Regressor, Standardizer};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkVariant {
    Unweighted,
    Weighted,
}

impl NetworkVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            NetworkVariant::Unweighted => "U",
            NetworkVariant::Weighted => "W",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum EmbedderChoice {
    /// No embedding: plain ML-kNN on the features.
    None,
    Line {
        order: LineOrder,
        negative_ratio: usize,
        sample_budget: Option<u64>,
        learning_rate: f64,
    },
    Node2vec {
        walks_per_node: usize,
        max_walk_length: Option<usize>,
        return_p: f64,
        inout_q: f64,
        window_size: usize,
        negative_ratio: usize,
        epochs: usize,
        learning_rate: f64,
    },
}

impl EmbedderChoice {
    pub fn line(order: LineOrder) -> Self {
        EmbedderChoice::Line {
            order,
            negative_ratio: line::DEFAULT_NEGATIVE_RATIO,
            sample_budget: None,
            learning_rate: line::DEFAULT_LEARNING_RATE,
        }
    }

    pub fn node2vec() -> Self {
        let d = Node2vecConfig::new(2, 0);
        EmbedderChoice::Node2vec {
            walks_per_node: d.walks_per_node,
            max_walk_length: d.max_walk_length,
            return_p: d.return_p,
            inout_q: d.inout_q,
            window_size: d.window_size,
            negative_ratio: d.negative_ratio,
            epochs: d.epochs,
            learning_rate: d.learning_rate,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EmbedderChoice::None => "none",
            EmbedderChoice::Line { .. } => "line",
            EmbedderChoice::Node2vec { .. } => "node2vec",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimensionChoice {
    /// Power of two nearest to five times the label count.
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RegressorChoice {
    None,
    Ridge { lambda: f64, standardize: bool },
    /// The forest seed is derived from the pipeline seed.
    Forest(ForestConfig),
}

impl RegressorChoice {
    pub fn name(&self) -> &'static str {
        match self {
            RegressorChoice::None => "none",
            RegressorChoice::Ridge { .. } => "ridge",
            RegressorChoice::Forest(_) => "forest",
        }
    }
}

/// How the feature block and the embedding block are scaled before
/// distances are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingMode {
    None,
    StandardizeBoth,
    StandardizeEmbedding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LnemlcConfig {
    pub network: NetworkVariant,
    pub embedder: EmbedderChoice,
    pub dimension: DimensionChoice,
    pub aggregation: AggregationKind,
    pub regressor: RegressorChoice,
    pub scaling: ScalingMode,
    pub k: usize,
    pub smoothing: f64,
    pub seed: u64,
}

impl Default for LnemlcConfig {
    fn default() -> Self {
        LnemlcConfig {
            network: NetworkVariant::Unweighted,
            embedder: EmbedderChoice::line(LineOrder::Concat),
            dimension: DimensionChoice::Auto,
            aggregation: AggregationKind::Sum,
            regressor: RegressorChoice::Forest(ForestConfig::default()),
            scaling: ScalingMode::StandardizeBoth,
            k: DEFAULT_K,
            smoothing: DEFAULT_SMOOTHING,
            seed: 0,
        }
    }
}

impl LnemlcConfig {
    /// The no-embedding ML-kNN control with otherwise identical settings.
    pub fn baseline(&self) -> Self {
        LnemlcConfig {
            embedder: EmbedderChoice::None,
            regressor: RegressorChoice::None,
            ..self.clone()
        }
    }

    pub fn is_baseline(&self) -> bool {
        self.embedder == EmbedderChoice::None
    }

    /// Embedding dimension for `labels` labels (0 for the baseline).
    pub fn resolve_dimension(&self, labels: usize) -> usize {
        if self.is_baseline() {
            return 0;
        }
        match self.dimension {
            DimensionChoice::Auto => dimension_for_labels(labels),
            DimensionChoice::Fixed(d) => d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be >= 1".into()));
        }
        if !(self.smoothing > 0.0) {
            return Err(Error::InvalidConfig("smoothing must be positive".into()));
        }
        if let DimensionChoice::Fixed(d) = self.dimension {
            if !self.is_baseline() {
                validate_grid_dimension(d)?;
            }
        }
        match &self.regressor {
            RegressorChoice::Ridge { lambda, .. } if !(*lambda >= 0.0) => {
                return Err(Error::InvalidConfig("ridge penalty must be non-negative".into()))
            }
            RegressorChoice::Forest(f) => f.validate()?,
            _ => {}
        }
        Ok(())
    }
}

/// Power of two closest to `5 l`, ties rounding up, clamped to `[4, 4096]`.
pub fn dimension_for_labels(labels: usize) -> usize {
    let target = 5 * labels;
    let mut best = 4usize;
    let mut d = 4usize;
    while d <= 4096 {
        if d.abs_diff(target) <= best.abs_diff(target) {
            best = d;
        }
        d *= 2;
    }
    best
}

/// Pluggable execution of the expensive steps plus an optional clock.
/// The default methods are the deterministic single-threaded reference.
pub trait Backend {
    fn now_micros(&self) -> Option<u64> {
        None
    }

    fn train_line(&self, graph: &LabelGraph, config: &LineConfig) -> Result<EmbeddingTable> {
        line::train_line(graph, config)
    }

    fn train_node2vec(&self, graph: &LabelGraph, config: &Node2vecConfig, max_cardinality: usize) -> Result<EmbeddingTable> {
        node2vec::train_node2vec(graph, config, max_cardinality)
    }

    fn fit_forest(&self, x: &Matrix<f64>, y: &Matrix<f64>, config: &ForestConfig) -> Result<regress::ForestModel> {
        regress::fit_forest(x, y, config)
    }

    fn fit_mlknn(&self, x: &Matrix<f64>, y: &LabelMatrix, k: usize, smoothing: f64) -> Result<MlknnModel> {
        MlknnModel::fit(x, y, k, smoothing)
    }

    fn predict_mlknn(&self, model: &MlknnModel, queries: &Matrix<f64>) -> Result<MlknnPrediction> {
        model.predict(queries)
    }

    fn predict_regressor(&self, model: &Regressor, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        model.predict(x)
    }
}

/// Single-threaded reference backend without a clock.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Backend for Sequential {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: String,
    /// Microseconds since an arbitrary origin; `None` without a clock.
    pub started_us: Option<u64>,
    pub elapsed_us: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub n_samples: usize,
    pub n_features: usize,
    pub n_labels: usize,
    pub dimension: usize,
    /// Labels with no edge in the label graph (zero embedding vectors).
    pub isolated_labels: Vec<usize>,
    /// Training rows with no label (zero sample embedding).
    pub empty_label_rows: usize,
    pub line_sample_budget: Option<u64>,
    pub walk_length: Option<usize>,
    pub steps: Vec<StepRecord>,
    pub warnings: Vec<String>,
}

/// A trained model: embedding table, regressor, classifier and scalers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedLnemlc {
    pub config: LnemlcConfig,
    pub table: Option<EmbeddingTable>,
    pub regressor: Option<Regressor>,
    pub feature_scaler: Option<Standardizer>,
    pub embedding_scaler: Option<Standardizer>,
    pub classifier: MlknnModel,
    pub metadata: TrainingMetadata,
}

struct StepTimer<'a, B: Backend + ?Sized> {
    backend: &'a B,
    steps: Vec<StepRecord>,
}

impl<B: Backend + ?Sized> StepTimer<'_, B> {
    fn run<T>(&mut self, step: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = self.backend.now_micros();
        let out = f()?;
        let end = self.backend.now_micros();
        self.steps.push(StepRecord {
            step: step.into(),
            started_us: start,
            elapsed_us: start.zip(end).map(|(a, b)| b.saturating_sub(a)),
        });
        Ok(out)
    }
}

pub fn train(train_set: &MultiLabelDataset, config: &LnemlcConfig) -> Result<TrainedLnemlc> {
    train_with(train_set, config, &Sequential)
}

pub fn train_with<B: Backend + ?Sized>(train_set: &MultiLabelDataset, config: &LnemlcConfig, backend: &B) -> Result<TrainedLnemlc> {
    config.validate()?;
    let labels = train_set.labels();
    let l = train_set.n_labels();
    let d = config.resolve_dimension(l);
    let mut timer = StepTimer { backend, steps: Vec::new() };
    let mut warnings = Vec::new();
    let unassigned = train_set.unassigned_labels();
    if !unassigned.is_empty() {
        warnings.push(format!(
            "labels {unassigned:?} have no positive training sample; they get zero vectors and prior-only decisions"
        ));
    }

    let mut line_budget = None;
    let mut walk_length = None;
    let mut isolated = Vec::new();
    let mut table = None;

    if !config.is_baseline() {
        let graph = timer.run("build_graph", || Ok(build_graph(labels, config.network == NetworkVariant::Weighted)))?;
        isolated = graph.isolated_nodes();
        let t = timer.run("embed", || match &config.embedder {
            EmbedderChoice::Line {
                order,
                negative_ratio,
                sample_budget,
                learning_rate,
            } => {
                let lc = LineConfig {
                    dimension: d,
                    order: *order,
                    negative_ratio: *negative_ratio,
                    sample_budget: *sample_budget,
                    initial_learning_rate: *learning_rate,
                    seed: derive_seed(config.seed, 1),
                };
                line_budget = Some(lc.budget_for(&graph));
                backend.train_line(&graph, &lc)
            }
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
                let max_card = labels.max_cardinality();
                walk_length = Some(nc.walk_length(max_card));
                backend.train_node2vec(&graph, &nc, max_card)
            }
            EmbedderChoice::None => unreachable!("baseline has no embedder"),
        })?;
        table = Some(t);
    }

    let fitted = fit_from_table(train_set, config, table, backend, &mut timer)?;
    Ok(TrainedLnemlc {
        metadata: TrainingMetadata {
            n_samples: train_set.n_samples(),
            n_features: train_set.n_features(),
            n_labels: l,
            dimension: d,
            isolated_labels: isolated,
            empty_label_rows: fitted.empty_rows,
            line_sample_budget: line_budget,
            walk_length,
            steps: timer.steps,
            warnings,
        },
        config: config.clone(),
        table: fitted.table,
        regressor: fitted.regressor,
        feature_scaler: fitted.feature_scaler,
        embedding_scaler: fitted.embedding_scaler,
        classifier: fitted.classifier,
    })
}

struct Fitted {
    table: Option<EmbeddingTable>,
    regressor: Option<Regressor>,
    feature_scaler: Option<Standardizer>,
    embedding_scaler: Option<Standardizer>,
    classifier: MlknnModel,
    empty_rows: usize,
}

/// Steps 3-5 given an embedding table (or none for the baseline).
fn fit_from_table<B: Backend + ?Sized>(
    train_set: &MultiLabelDataset,
    config: &LnemlcConfig,
    table: Option<EmbeddingTable>,
    backend: &B,
    timer: &mut StepTimer<'_, B>,
) -> Result<Fitted> {
    let x = train_set.features();
    let y = train_set.labels();
    let feature_scaler = (config.scaling == ScalingMode::StandardizeBoth).then(|| Standardizer::fit(x));
    let x_block = match &feature_scaler {
        Some(s) => s.transform(x)?,
        None => x.clone(),
    };

    let Some(table) = table else {
        let classifier = timer.run("fit_classifier", || backend.fit_mlknn(&x_block, y, config.k, config.smoothing))?;
        return Ok(Fitted {
            table: None,
            regressor: None,
            feature_scaler,
            embedding_scaler: None,
            classifier,
            empty_rows: 0,
        });
    };

    let embedded = timer.run("aggregate", || aggregate(y, &table, config.aggregation))?;
    let e = embedded.vectors;

    let regressor = timer.run("fit_regressor", || {
        Ok(match &config.regressor {
            RegressorChoice::None => None,
            RegressorChoice::Ridge { lambda, standardize: true } => Some(regress::fit_standardized_ridge(x, &e, *lambda)?),
            RegressorChoice::Ridge { lambda, standardize: false } => Some(Regressor::Ridge {
                scaler: None,
                model: fit_ridge(x, &e, *lambda)?,
            }),
            RegressorChoice::Forest(fc) => {
                let fc = ForestConfig {
                    seed: derive_seed(config.seed, 3),
                    ..fc.clone()
                };
                Some(Regressor::Forest(backend.fit_forest(x, &e, &fc)?))
            }
        })
    })?;

    let embedding_scaler = (config.scaling != ScalingMode::None).then(|| Standardizer::fit(&e));
    let e_block = match &embedding_scaler {
        Some(s) => s.transform(&e)?,
        None => e,
    };
    let augmented = x_block.hconcat(&e_block)?;
    let classifier = timer.run("fit_classifier", || backend.fit_mlknn(&augmented, y, config.k, config.smoothing))?;
    Ok(Fitted {
        table: Some(table),
        regressor,
        feature_scaler,
        embedding_scaler,
        classifier,
        empty_rows: embedded.empty_rows,
    })
}

impl TrainedLnemlc {
    pub fn is_baseline(&self) -> bool {
        self.table.is_none()
    }

    pub fn dimension(&self) -> usize {
        self.metadata.dimension
    }

    fn feature_block(&self, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        if x.cols() != self.metadata.n_features {
            return Err(Error::ShapeMismatch {
                context: "input feature columns",
                expected: self.metadata.n_features,
                found: x.cols(),
            });
        }
        match &self.feature_scaler {
            Some(s) => s.transform(x),
            None => Ok(x.clone()),
        }
    }

    fn classify<B: Backend + ?Sized>(&self, x_block: Matrix<f64>, e: Option<Matrix<f64>>, backend: &B) -> Result<MlknnPrediction> {
        let queries = match e {
            None => x_block,
            Some(e) => {
                let e = match &self.embedding_scaler {
                    Some(s) => s.transform(&e)?,
                    None => e,
                };
                x_block.hconcat(&e)?
            }
        };
        backend.predict_mlknn(&self.classifier, &queries)
    }

    /// The no-embedding ML-kNN control for this model, rebuilt from the
    /// stored feature block; identical to training `config.baseline()`.
    pub fn baseline_with<B: Backend + ?Sized>(&self, backend: &B) -> Result<TrainedLnemlc> {
        if self.is_baseline() {
            return Ok(self.clone());
        }
        let x_block = self.classifier.training_inputs().leading_columns(self.metadata.n_features);
        let classifier = backend.fit_mlknn(&x_block, self.classifier.training_labels(), self.config.k, self.config.smoothing)?;
        Ok(TrainedLnemlc {
            config: self.config.baseline(),
            table: None,
            regressor: None,
            feature_scaler: self.feature_scaler.clone(),
            embedding_scaler: None,
            classifier,
            metadata: TrainingMetadata {
                dimension: 0,
                isolated_labels: Vec::new(),
                empty_label_rows: 0,
                line_sample_budget: None,
                walk_length: None,
                steps: Vec::new(),
                ..self.metadata.clone()
            },
        })
    }

    /// Regressed mode: the embedding block comes from the regressor.
    pub fn predict(&self, x: &Matrix<f64>) -> Result<LabelMatrix> {
        Ok(self.predict_with(x, &Sequential)?.assignments)
    }

    pub fn predict_with<B: Backend + ?Sized>(&self, x: &Matrix<f64>, backend: &B) -> Result<MlknnPrediction> {
        let x_block = self.feature_block(x)?;
        if self.is_baseline() {
            return self.classify(x_block, None, backend);
        }
        let regressor = self.regressor.as_ref().ok_or(Error::MissingRegressor)?;
        let e = backend.predict_regressor(regressor, x)?;
        self.classify(x_block, Some(e), backend)
    }

    /// Exact mode: the embedding block aggregates the true test labels
    /// through the training embedding table. Diagnostic only.
    pub fn predict_exact(&self, x: &Matrix<f64>, y_true: &LabelMatrix) -> Result<LabelMatrix> {
        Ok(self.predict_exact_with(x, y_true, &Sequential)?.assignments)
    }

    pub fn predict_exact_with<B: Backend + ?Sized>(&self, x: &Matrix<f64>, y_true: &LabelMatrix, backend: &B) -> Result<MlknnPrediction> {
        if y_true.cols() != self.metadata.n_labels {
            return Err(Error::ShapeMismatch {
                context: "true label columns",
                expected: self.metadata.n_labels,
                found: y_true.cols(),
            });
        }
        if y_true.rows() != x.rows() {
            return Err(Error::ShapeMismatch {
                context: "true label rows",
                expected: x.rows(),
                found: y_true.rows(),
            });
        }
        let x_block = self.feature_block(x)?;
        match &self.table {
            None => self.classify(x_block, None, backend),
            Some(table) => {
                let e = aggregate(y_true, table, self.config.aggregation)?.vectors;
                self.classify(x_block, Some(e), backend)
            }
        }
    }
}

/// Steps 3-5 on a supplied embedding table; used to probe the pipeline with
/// hand-built tables.
pub fn train_from_table(train_set: &MultiLabelDataset, config: &LnemlcConfig, table: EmbeddingTable) -> Result<TrainedLnemlc> {
    config.validate()?;
    if table.label_count() != train_set.n_labels() {
        return Err(Error::ShapeMismatch {
            context: "embedding table rows",
            expected: train_set.n_labels(),
            found: table.label_count(),
        });
    }
    let mut timer = StepTimer {
        backend: &Sequential,
        steps: Vec::new(),
    };
    let d = table.dimension();
    let fitted = fit_from_table(train_set, config, Some(table), &Sequential, &mut timer)?;
    Ok(TrainedLnemlc {
        metadata: TrainingMetadata {
            n_samples: train_set.n_samples(),
            n_features: train_set.n_features(),
            n_labels: train_set.n_labels(),
            dimension: d,
            isolated_labels: Vec::new(),
            empty_label_rows: fitted.empty_rows,
            line_sample_budget: None,
            walk_length: None,
            steps: timer.steps,
            warnings: Vec::new(),
        },
        config: config.clone(),
        table: fitted.table,
        regressor: fitted.regressor,
        feature_scaler: fitted.feature_scaler,
        embedding_scaler: fitted.embedding_scaler,
        classifier: fitted.classifier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn dimension_rule() {
        assert_eq!(dimension_for_labels(6), 32);
        assert_eq!(dimension_for_labels(14), 64);
        assert_eq!(dimension_for_labels(1), 4);
        assert_eq!(dimension_for_labels(100), 512);
        assert_eq!(dimension_for_labels(5000), 4096);
        // 5l = 60 is 4 from 64 and 28 from 32; 5l = 96 ties 64 and 128 → up
        assert_eq!(dimension_for_labels(12), 64);
        assert_eq!(dimension_for_labels(24), 128);
    }

    #[test]
    fn config_checks() {
        let mut c = LnemlcConfig::default();
        assert!(c.validate().is_ok());
        c.dimension = DimensionChoice::Fixed(7);
        assert!(c.validate().is_err());
        c.dimension = DimensionChoice::Fixed(16);
        assert!(c.validate().is_ok());
        assert_eq!(c.resolve_dimension(6), 16);
        assert_eq!(c.baseline().resolve_dimension(6), 0);
        c.k = 0;
        assert!(c.validate().is_err());
    }

    fn small_set() -> MultiLabelDataset {
        let x = Matrix::from_rows(&[
            vec![0.0, 0.1],
            vec![0.2, 0.0],
            vec![0.1, 0.2],
            vec![5.0, 5.1],
            vec![5.2, 5.0],
            vec![5.1, 4.9],
            vec![0.0, 5.0],
            vec![0.1, 5.2],
        ])
        .unwrap();
        let y = Matrix::from_rows(&[
            vec![1u8, 0, 0],
            vec![1, 0, 0],
            vec![1, 1, 0],
            vec![0, 1, 1],
            vec![0, 1, 1],
            vec![0, 1, 1],
            vec![0, 0, 1],
            vec![0, 0, 1],
        ])
        .unwrap();
        MultiLabelDataset::from_matrices(x, y).unwrap()
    }

    fn quick_config() -> LnemlcConfig {
        LnemlcConfig {
            embedder: EmbedderChoice::Line {
                order: LineOrder::Concat,
                negative_ratio: 5,
                sample_budget: Some(5_000),
                learning_rate: 0.025,
            },
            regressor: RegressorChoice::Ridge {
                lambda: 1.0,
                standardize: true,
            },
            k: 3,
            seed: 17,
            ..Default::default()
        }
    }

    #[test]
    fn step_order_is_recorded() {
        let m = train(&small_set(), &quick_config()).unwrap();
        let names: Vec<&str> = m.metadata.steps.iter().map(|s| s.step.as_str()).collect();
        assert_eq!(names, ["build_graph", "embed", "aggregate", "fit_regressor", "fit_classifier"]);
        assert_eq!(m.dimension(), 16);
        assert_eq!(m.classifier.n_features(), 2 + 16);
    }

    #[test]
    fn missing_regressor_is_an_error() {
        let mut c = quick_config();
        c.regressor = RegressorChoice::None;
        let ds = small_set();
        let m = train(&ds, &c).unwrap();
        assert_eq!(m.predict(ds.features()), Err(Error::MissingRegressor));
        assert!(m.predict_exact(ds.features(), ds.labels()).is_ok());
    }

    #[test]
    fn exact_mode_shapes() {
        let ds = small_set();
        let m = train(&ds, &quick_config()).unwrap();
        let one = ds.features().select_rows(&[0]);
        assert_eq!(m.predict(&one).unwrap().rows(), 1);
        assert!(m.predict_exact(&one, &Matrix::zeros(1, 2)).is_err());
        assert!(m.predict(&Matrix::zeros(1, 3)).is_err());
    }

    #[test]
    fn unassigned_labels_warn() {
        let x = Matrix::from_vec(5, 1, vec![0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        let y = Matrix::from_rows(&[vec![1u8, 0, 0], vec![1, 0, 0], vec![0, 0, 1], vec![1, 0, 1], vec![0, 0, 1]]).unwrap();
        let ds = MultiLabelDataset::from_matrices(x, y).unwrap();
        let mut c = quick_config();
        c.k = 2;
        let m = train(&ds, &c).unwrap();
        assert_eq!(m.metadata.isolated_labels, vec![1]);
        assert_eq!(m.metadata.warnings.len(), 1);
        assert!(m.table.as_ref().unwrap().vector(1).iter().all(|&v| v == 0.0));
        let p = m.predict(ds.features()).unwrap();
        assert!((0..5).all(|i| p.get(i, 1) == 0));
    }
}
