//! Multi-output regressors from input features to the sample embedding.

mod forest;
mod ridge;
mod scaler;

pub use forest::{assemble_forest, fit_forest, fit_member, ForestConfig, ForestMember, ForestModel, Tree, TreeNode};
pub use ridge::{cholesky_solve, fit_ridge, RidgeModel};
pub use scaler::Standardizer;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::Matrix;

/// A fitted embedding regressor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Regressor {
    /// Ridge on (optionally) standardized inputs.
    Ridge {
        scaler: Option<Standardizer>,
        model: RidgeModel,
    },
    Forest(ForestModel),
}

impl Regressor {
    pub fn predict(&self, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        match self {
            Regressor::Ridge { scaler: Some(s), model } => model.predict(&s.transform(x)?),
            Regressor::Ridge { scaler: None, model } => model.predict(x),
            Regressor::Forest(f) => f.predict(x),
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            Regressor::Ridge { model, .. } => model.intercept.len(),
            Regressor::Forest(f) => f.n_outputs,
        }
    }
}

/// Ridge with train-fit standardization of the inputs.
pub fn fit_standardized_ridge(x: &Matrix<f64>, e: &Matrix<f64>, lambda: f64) -> Result<Regressor> {
    let scaler = Standardizer::fit(x);
    let model = fit_ridge(&scaler.transform(x)?, e, lambda)?;
    Ok(Regressor::Ridge {
        scaler: Some(scaler),
        model,
    })
}
