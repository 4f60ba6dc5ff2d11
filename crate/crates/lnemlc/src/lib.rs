//! File formats, model bundles, experiment runs, a multi-threaded backend
//! and the command-line tool built on `lnemlc-core`.

pub mod arff;
pub mod bundle;
pub mod cli;
pub mod config;
pub mod experiment;
pub mod formats;
pub mod parallel;
pub mod synth;

pub use lnemlc_core as core;
