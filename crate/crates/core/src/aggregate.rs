//! Per-sample aggregation of label vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::line::EmbeddingTable;
use crate::matrix::{LabelMatrix, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregationKind {
    Sum,
    Mean,
    Product,
}

impl AggregationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AggregationKind::Sum => "sum",
            AggregationKind::Mean => "mean",
            AggregationKind::Product => "prod",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sum" | "add" | "addition" => Some(AggregationKind::Sum),
            "mean" | "avg" | "average" => Some(AggregationKind::Mean),
            "prod" | "product" | "mul" | "multiplication" => Some(AggregationKind::Product),
            _ => None,
        }
    }
}

/// Aggregated embeddings, one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleEmbedding {
    pub vectors: Matrix<f64>,
    /// Rows whose label set was empty (set to the zero vector).
    pub empty_rows: usize,
}

/// Row `i` is the sum, mean or elementwise product of the vectors of the
/// labels set in row `i`. An empty label set maps to the zero vector for
/// every kind.
pub fn aggregate(labels: &LabelMatrix, table: &EmbeddingTable, kind: AggregationKind) -> Result<SampleEmbedding> {
    if labels.cols() != table.label_count() {
        return Err(Error::ShapeMismatch {
            context: "embedding table rows vs label columns",
            expected: labels.cols(),
            found: table.label_count(),
        });
    }
    let d = table.dimension();
    let mut out = Matrix::zeros(labels.rows(), d);
    let mut empty_rows = 0;
    for (i, row) in labels.iter_rows().enumerate() {
        let target = out.row_mut(i);
        let mut count = 0usize;
        for (j, _) in row.iter().enumerate().filter(|(_, &v)| v == 1) {
            let v = table.vector(j);
            if count == 0 {
                target.copy_from_slice(v);
            } else {
                match kind {
                    AggregationKind::Sum | AggregationKind::Mean => {
                        target.iter_mut().zip(v).for_each(|(a, b)| *a += b)
                    }
                    AggregationKind::Product => target.iter_mut().zip(v).for_each(|(a, b)| *a *= b),
                }
            }
            count += 1;
        }
        if count == 0 {
            empty_rows += 1;
        } else if kind == AggregationKind::Mean && count > 1 {
            let c = count as f64;
            target.iter_mut().for_each(|a| *a /= c);
        }
    }
    Ok(SampleEmbedding { vectors: out, empty_rows })
}
