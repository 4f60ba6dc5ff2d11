//! Label network embeddings for multi-label classification.
//!
//! The training scheme builds a co-occurrence network over the training
//! labels, embeds it (LINE or node2vec), aggregates label vectors into one
//! vector per sample, learns a regressor from input features to that
//! embedded space and finally trains ML-kNN on the features joined with the
//! embedding. At prediction time the regressor supplies the embedding block.
//!
//! This crate is `no_std` (it needs `alloc`). File formats, the CLI and the
//! multi-threaded training modes live in the `lnemlc` companion crate.

#![no_std]

extern crate alloc;

pub mod aggregate;
pub mod alias;
pub mod dataset;
pub mod error;
pub mod label_graph;
pub mod line;
pub mod matrix;
pub mod metrics;
pub mod mlknn;
pub mod node2vec;
pub mod pipeline;
pub mod regress;
pub mod rng;
pub mod sgd;
pub mod stratify;

pub use error::{Error, Result};
pub use matrix::{LabelMatrix, Matrix};
