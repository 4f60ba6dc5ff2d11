//! Declarative run configuration (TOML) and command-line overrides.
//!
//! Every key is optional; missing keys take the recommended defaults.
//!
//! ```toml
//! seed = 0
//! network = "unweighted"        # unweighted | weighted
//! embedder = "line"             # line | node2vec | none
//! order = "1+2"                 # LINE order: 1 | 2 | 1+2
//! aggregation = "sum"           # sum | mean | prod
//! dimension = "auto"            # "auto" or a power of two in 4..=4096
//! regressor = "forest"          # forest | ridge | none
//! scaling = "standardize-both"  # none | standardize-both | standardize-embedding
//! k = 5
//! smoothing = 1.0
//!
//! [line]
//! negative_ratio = 5
//! sample_budget = 200000        # default: max(1000 × edges, 100000)
//! learning_rate = 0.025
//!
//! [node2vec]
//! walks_per_node = 200
//! max_walk_length = 12          # default: 2 × largest label cardinality
//! return_p = 1.0
//! inout_q = 1.0
//! window_size = 10
//! negative_ratio = 5
//! epochs = 5
//! learning_rate = 0.025
//!
//! [ridge]
//! lambda = 1.0
//! standardize = true
//!
//! [forest]
//! trees = 100
//! max_depth = 20                # default: unbounded
//! min_samples_leaf = 1
//! features_per_split = 10       # default: ceil(m / 3)
//! bootstrap = true
//!
//! [grid]                        # sweep only; each list defaults to the base value
//! networks = ["unweighted", "weighted"]
//! orders = ["1", "2", "1+2"]
//! aggregations = ["sum", "mean", "prod"]
//! dimensions = [4, 8, 16, 32]
//! ```

use std::path::Path;

use lnemlc_core::aggregate::AggregationKind;
use lnemlc_core::line::{validate_grid_dimension, LineOrder};
use lnemlc_core::pipeline::{DimensionChoice, EmbedderChoice, LnemlcConfig, NetworkVariant, RegressorChoice, ScalingMode};
use lnemlc_core::regress::ForestConfig;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl From<lnemlc_core::Error> for ConfigError {
    fn from(e: lnemlc_core::Error) -> Self {
        ConfigError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum DimensionValue {
    Fixed(usize),
    Named(String),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSection {
    pub negative_ratio: Option<usize>,
    pub sample_budget: Option<u64>,
    pub learning_rate: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node2vecSection {
    pub walks_per_node: Option<usize>,
    pub max_walk_length: Option<usize>,
    pub return_p: Option<f64>,
    pub inout_q: Option<f64>,
    pub window_size: Option<usize>,
    pub negative_ratio: Option<usize>,
    pub epochs: Option<usize>,
    pub learning_rate: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RidgeSection {
    pub lambda: Option<f64>,
    pub standardize: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForestSection {
    pub trees: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: Option<usize>,
    pub features_per_split: Option<usize>,
    pub bootstrap: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub networks: Option<Vec<String>>,
    pub embedders: Option<Vec<String>>,
    pub orders: Option<Vec<String>>,
    pub aggregations: Option<Vec<String>>,
    pub dimensions: Option<Vec<DimensionValue>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub network: Option<String>,
    pub embedder: Option<String>,
    pub order: Option<String>,
    pub aggregation: Option<String>,
    pub dimension: Option<DimensionValue>,
    pub regressor: Option<String>,
    pub scaling: Option<String>,
    pub k: Option<usize>,
    pub smoothing: Option<f64>,
    #[serde(default)]
    pub line: LineSection,
    #[serde(default)]
    pub node2vec: Node2vecSection,
    #[serde(default)]
    pub ridge: RidgeSection,
    #[serde(default)]
    pub forest: ForestSection,
    #[serde(default)]
    pub grid: GridSection,
}

/// Values given on the command line; each one beats the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub network: Option<String>,
    pub embedder: Option<String>,
    pub order: Option<String>,
    pub aggregation: Option<String>,
    pub dimension: Option<DimensionValue>,
    pub regressor: Option<String>,
}

impl FileConfig {
    /// `"default"` (or no path) gives the recommended configuration.
    pub fn load(path: Option<&str>) -> Result<FileConfig, ConfigError> {
        match path {
            None | Some("default") => Ok(FileConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(Path::new(p)).map_err(|source| ConfigError::Io {
                    path: p.to_string(),
                    source,
                })?;
                FileConfig::parse(&text, p)
            }
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<FileConfig, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_string(),
            message: e.to_string(),
        })
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($field:ident) => {
                if o.$field.is_some() {
                    self.$field = o.$field.clone();
                }
            };
        }
        take!(seed);
        take!(network);
        take!(embedder);
        take!(order);
        take!(aggregation);
        take!(dimension);
        take!(regressor);
    }

    pub fn to_config(&self) -> Result<LnemlcConfig, ConfigError> {
        let base = LnemlcConfig::default();
        let order = self.order.as_deref().map(parse_order).transpose()?.unwrap_or(LineOrder::Concat);
        let embedder = match self.embedder.as_deref().unwrap_or("line") {
            "line" => {
                let EmbedderChoice::Line {
                    negative_ratio,
                    learning_rate,
                    ..
                } = EmbedderChoice::line(order)
                else {
                    unreachable!()
                };
                EmbedderChoice::Line {
                    order,
                    negative_ratio: self.line.negative_ratio.unwrap_or(negative_ratio),
                    sample_budget: self.line.sample_budget,
                    learning_rate: self.line.learning_rate.unwrap_or(learning_rate),
                }
            }
            "node2vec" => {
                let EmbedderChoice::Node2vec {
                    walks_per_node,
                    return_p,
                    inout_q,
                    window_size,
                    negative_ratio,
                    epochs,
                    learning_rate,
                    ..
                } = EmbedderChoice::node2vec()
                else {
                    unreachable!()
                };
                let s = &self.node2vec;
                EmbedderChoice::Node2vec {
                    walks_per_node: s.walks_per_node.unwrap_or(walks_per_node),
                    max_walk_length: s.max_walk_length,
                    return_p: s.return_p.unwrap_or(return_p),
                    inout_q: s.inout_q.unwrap_or(inout_q),
                    window_size: s.window_size.unwrap_or(window_size),
                    negative_ratio: s.negative_ratio.unwrap_or(negative_ratio),
                    epochs: s.epochs.unwrap_or(epochs),
                    learning_rate: s.learning_rate.unwrap_or(learning_rate),
                }
            }
            "none" => EmbedderChoice::None,
            other => return Err(ConfigError::Invalid(format!("unknown embedder '{other}'"))),
        };
        let defaults = ForestConfig::default();
        let regressor = match self.regressor.as_deref().unwrap_or("forest") {
            "forest" => RegressorChoice::Forest(ForestConfig {
                trees: self.forest.trees.unwrap_or(defaults.trees),
                max_depth: self.forest.max_depth,
                min_samples_leaf: self.forest.min_samples_leaf.unwrap_or(defaults.min_samples_leaf),
                features_per_split: self.forest.features_per_split,
                bootstrap: self.forest.bootstrap.unwrap_or(defaults.bootstrap),
                seed: 0,
            }),
            "ridge" => RegressorChoice::Ridge {
                lambda: self.ridge.lambda.unwrap_or(1.0),
                standardize: self.ridge.standardize.unwrap_or(true),
            },
            "none" => RegressorChoice::None,
            other => return Err(ConfigError::Invalid(format!("unknown regressor '{other}'"))),
        };
        let config = LnemlcConfig {
            network: self.network.as_deref().map(parse_network).transpose()?.unwrap_or(base.network),
            embedder,
            dimension: self.dimension.as_ref().map(parse_dimension).transpose()?.unwrap_or(base.dimension),
            aggregation: self.aggregation.as_deref().map(parse_aggregation).transpose()?.unwrap_or(base.aggregation),
            regressor,
            scaling: self.scaling.as_deref().map(parse_scaling).transpose()?.unwrap_or(base.scaling),
            k: self.k.unwrap_or(base.k),
            smoothing: self.smoothing.unwrap_or(base.smoothing),
            seed: self.seed.unwrap_or(base.seed),
        };
        config.validate()?;
        Ok(config)
    }

    /// Every combination of the `[grid]` lists, network-major.
    pub fn grid(&self) -> Result<Vec<LnemlcConfig>, ConfigError> {
        let g = &self.grid;
        let one = |v: &Option<String>| v.iter().cloned().map(Some).collect::<Vec<_>>();
        let list = |grid: &Option<Vec<String>>, base: &Option<String>| match grid {
            Some(values) => values.iter().cloned().map(Some).collect(),
            None if base.is_some() => one(base),
            None => vec![None],
        };
        let networks = list(&g.networks, &self.network);
        let embedders = list(&g.embedders, &self.embedder);
        let orders = list(&g.orders, &self.order);
        let aggregations = list(&g.aggregations, &self.aggregation);
        let dimensions: Vec<Option<DimensionValue>> = match &g.dimensions {
            Some(values) => values.iter().cloned().map(Some).collect(),
            None => vec![self.dimension.clone()],
        };
        let mut out = Vec::new();
        for network in &networks {
            for embedder in &embedders {
                for order in &orders {
                    for aggregation in &aggregations {
                        for dimension in &dimensions {
                            let mut f = self.clone();
                            f.network = network.clone();
                            f.embedder = embedder.clone();
                            f.order = order.clone();
                            f.aggregation = aggregation.clone();
                            f.dimension = dimension.clone();
                            out.push(f.to_config()?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn parse_network(s: &str) -> Result<NetworkVariant, ConfigError> {
    match s.to_ascii_lowercase().as_str() {
        "unweighted" | "u" => Ok(NetworkVariant::Unweighted),
        "weighted" | "w" => Ok(NetworkVariant::Weighted),
        _ => Err(ConfigError::Invalid(format!("unknown network variant '{s}'"))),
    }
}

pub fn parse_order(s: &str) -> Result<LineOrder, ConfigError> {
    LineOrder::parse(s).ok_or_else(|| ConfigError::Invalid(format!("unknown LINE order '{s}' (use 1, 2 or 1+2)")))
}

pub fn parse_aggregation(s: &str) -> Result<AggregationKind, ConfigError> {
    AggregationKind::parse(s).ok_or_else(|| ConfigError::Invalid(format!("unknown aggregation '{s}' (use sum, mean or prod)")))
}

pub fn parse_scaling(s: &str) -> Result<ScalingMode, ConfigError> {
    match s {
        "none" => Ok(ScalingMode::None),
        "standardize-both" => Ok(ScalingMode::StandardizeBoth),
        "standardize-embedding" => Ok(ScalingMode::StandardizeEmbedding),
        _ => Err(ConfigError::Invalid(format!("unknown scaling mode '{s}'"))),
    }
}

pub fn parse_dimension(v: &DimensionValue) -> Result<DimensionChoice, ConfigError> {
    match v {
        DimensionValue::Named(s) if s == "auto" => Ok(DimensionChoice::Auto),
        DimensionValue::Named(s) => match s.parse::<usize>() {
            Ok(d) => parse_dimension(&DimensionValue::Fixed(d)),
            Err(_) => Err(ConfigError::Invalid(format!("dimension must be 'auto' or a power of two, got '{s}'"))),
        },
        DimensionValue::Fixed(d) => {
            validate_grid_dimension(*d)?;
            Ok(DimensionChoice::Fixed(*d))
        }
    }
}
