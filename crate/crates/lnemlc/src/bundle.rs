//! Model bundles: a directory holding a trained model.
//!
//! ```text
//! bundle/
//!   manifest.json    format tag, version, config, metadata, names, file map
//!   embedding.txt    label vectors (`l d` header, `name v1 … vd` rows); absent for the baseline
//!   regressor.json   ridge or forest parameters; absent when no regressor was fitted
//!   classifier.json  ML-kNN training block, labels, priors and likelihood tables
//!   scalers.json     feature and embedding standardisers
//! ```
//!
//! Floats are written in shortest round-trip form, so loading a bundle
//! reproduces the model exactly.

use std::fs;
use std::path::{Path, PathBuf};

use lnemlc_core::line::EmbeddingKind;
use lnemlc_core::mlknn::MlknnModel;
use lnemlc_core::pipeline::{LnemlcConfig, TrainedLnemlc, TrainingMetadata};
use lnemlc_core::regress::{Regressor, Standardizer};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formats::{read_embedding, write_embedding, FormatError};

pub const BUNDLE_FORMAT: &str = "lnemlc-bundle";
pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Embedding {
        path: String,
        #[source]
        source: FormatError,
    },
    #[error("unsupported bundle format '{format}' version {version}")]
    Version { format: String, version: u32 },
    #[error("bundle is inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Components {
    pub embedding: Option<String>,
    pub regressor: Option<String>,
    pub classifier: String,
    pub scalers: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleManifest {
    pub format: String,
    pub version: u32,
    pub config: LnemlcConfig,
    pub metadata: TrainingMetadata,
    pub embedding_kind: Option<EmbeddingKind>,
    pub feature_names: Vec<String>,
    pub label_names: Vec<String>,
    pub components: Components,
    /// Run manifest of the command that produced the bundle, if any.
    pub run_manifest: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Scalers {
    feature: Option<Standardizer>,
    embedding: Option<Standardizer>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub model: TrainedLnemlc,
    pub feature_names: Vec<String>,
    pub label_names: Vec<String>,
    pub run_manifest: Option<String>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BundleError + '_ {
    move |source| BundleError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), BundleError> {
    let text = serde_json::to_string_pretty(value).map_err(|source| BundleError::Json {
        path: path.display().to_string(),
        source,
    })?;
    fs::write(path, text).map_err(io_err(path))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, BundleError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| BundleError::Json {
        path: path.display().to_string(),
        source,
    })
}

impl Bundle {
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<PathBuf, BundleError> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let m = &self.model;
        let components = Components {
            embedding: m.table.as_ref().map(|_| "embedding.txt".to_string()),
            regressor: m.regressor.as_ref().map(|_| "regressor.json".to_string()),
            classifier: "classifier.json".into(),
            scalers: "scalers.json".into(),
        };
        if let Some(table) = &m.table {
            let path = dir.join("embedding.txt");
            fs::write(&path, write_embedding(table, &self.label_names)).map_err(io_err(&path))?;
        }
        if let Some(reg) = &m.regressor {
            write_json(&dir.join("regressor.json"), reg)?;
        }
        write_json(&dir.join("classifier.json"), &m.classifier)?;
        write_json(
            &dir.join("scalers.json"),
            &Scalers {
                feature: m.feature_scaler.clone(),
                embedding: m.embedding_scaler.clone(),
            },
        )?;
        let manifest = BundleManifest {
            format: BUNDLE_FORMAT.into(),
            version: BUNDLE_VERSION,
            config: m.config.clone(),
            metadata: m.metadata.clone(),
            embedding_kind: m.table.as_ref().map(|t| t.kind),
            feature_names: self.feature_names.clone(),
            label_names: self.label_names.clone(),
            components,
            run_manifest: self.run_manifest.clone(),
        };
        let path = dir.join("manifest.json");
        write_json(&path, &manifest)?;
        Ok(path)
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Bundle, BundleError> {
        let dir = dir.as_ref();
        let manifest: BundleManifest = read_json(&dir.join("manifest.json"))?;
        if manifest.format != BUNDLE_FORMAT || manifest.version != BUNDLE_VERSION {
            return Err(BundleError::Version {
                format: manifest.format,
                version: manifest.version,
            });
        }
        let table = match &manifest.components.embedding {
            Some(file) => {
                let path = dir.join(file);
                let text = fs::read_to_string(&path).map_err(io_err(&path))?;
                let (_, mut table) = read_embedding(&text).map_err(|source| BundleError::Embedding {
                    path: path.display().to_string(),
                    source,
                })?;
                table.kind = manifest.embedding_kind.unwrap_or(EmbeddingKind::External);
                Some(table)
            }
            None => None,
        };
        let regressor: Option<Regressor> = match &manifest.components.regressor {
            Some(file) => Some(read_json(&dir.join(file))?),
            None => None,
        };
        let classifier: MlknnModel = read_json(&dir.join(&manifest.components.classifier))?;
        let scalers: Scalers = read_json(&dir.join(&manifest.components.scalers))?;

        let md = &manifest.metadata;
        let expected_cols = md.n_features + table.as_ref().map_or(0, |t| t.dimension());
        if classifier.n_features() != expected_cols || classifier.n_labels() != md.n_labels {
            return Err(BundleError::Inconsistent(format!(
                "classifier expects {}x{} but metadata implies {}x{}",
                classifier.n_features(),
                classifier.n_labels(),
                expected_cols,
                md.n_labels
            )));
        }
        if manifest.feature_names.len() != md.n_features || manifest.label_names.len() != md.n_labels {
            return Err(BundleError::Inconsistent("name lists do not match metadata".into()));
        }
        Ok(Bundle {
            model: TrainedLnemlc {
                config: manifest.config,
                table,
                regressor,
                feature_scaler: scalers.feature,
                embedding_scaler: scalers.embedding,
                classifier,
                metadata: manifest.metadata,
            },
            feature_names: manifest.feature_names,
            label_names: manifest.label_names,
            run_manifest: manifest.run_manifest,
        })
    }
}
