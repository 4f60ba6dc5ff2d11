use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("shape mismatch in {context}: expected {expected}, found {found}")]
    ShapeMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("linear system is singular (increase the ridge penalty or drop collinear features)")]
    Singular,

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("walk corpus is empty")]
    EmptyCorpus,

    #[error("all alias weights are zero")]
    ZeroWeights,

    #[error("need more than {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("fold count {folds} is infeasible for {samples} samples")]
    InfeasibleFolds { folds: usize, samples: usize },

    #[error("fold {0} would leave an empty partition")]
    EmptyPartition(usize),

    #[error("model has no embedding regressor; use exact mode or train with a regressor")]
    MissingRegressor,
}
