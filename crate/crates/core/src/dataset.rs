//! Multi-label datasets and fold bookkeeping.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{LabelMatrix, Matrix};

/// Feature matrix `n × m` paired with a binary label matrix `n × l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiLabelDataset {
    features: Matrix<f64>,
    labels: LabelMatrix,
    feature_names: Vec<String>,
    label_names: Vec<String>,
}

impl MultiLabelDataset {
    pub fn new(
        features: Matrix<f64>,
        labels: LabelMatrix,
        feature_names: Vec<String>,
        label_names: Vec<String>,
    ) -> Result<Self> {
        let ds = MultiLabelDataset {
            features,
            labels,
            feature_names,
            label_names,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// Builds a dataset with generated names (`f0..`, `l0..`).
    pub fn from_matrices(features: Matrix<f64>, labels: LabelMatrix) -> Result<Self> {
        let feature_names = (0..features.cols()).map(|j| format!("f{j}")).collect();
        let label_names = (0..labels.cols()).map(|j| format!("l{j}")).collect();
        Self::new(features, labels, feature_names, label_names)
    }

    fn validate(&self) -> Result<()> {
        let (n, m, l) = (self.features.rows(), self.features.cols(), self.labels.cols());
        if n == 0 {
            return Err(Error::InvalidDataset("dataset has no samples".into()));
        }
        if m == 0 {
            return Err(Error::InvalidDataset("dataset has no features".into()));
        }
        if l < 2 {
            return Err(Error::InvalidDataset(format!(
                "multi-label data needs at least 2 labels, got {l}"
            )));
        }
        if self.labels.rows() != n {
            return Err(Error::ShapeMismatch {
                context: "label rows",
                expected: n,
                found: self.labels.rows(),
            });
        }
        if self.feature_names.len() != m {
            return Err(Error::ShapeMismatch {
                context: "feature names",
                expected: m,
                found: self.feature_names.len(),
            });
        }
        if self.label_names.len() != l {
            return Err(Error::ShapeMismatch {
                context: "label names",
                expected: l,
                found: self.label_names.len(),
            });
        }
        if !self.labels.is_binary() {
            return Err(Error::InvalidDataset("label entries must be 0 or 1".into()));
        }
        if !self.features.is_finite() {
            return Err(Error::InvalidDataset("features contain NaN or infinity".into()));
        }
        Ok(())
    }

    pub fn features(&self) -> &Matrix<f64> {
        &self.features
    }

    pub fn labels(&self) -> &LabelMatrix {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn n_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn n_labels(&self) -> usize {
        self.labels.cols()
    }

    /// Labels with no positive sample. They are kept as all-zero columns.
    pub fn unassigned_labels(&self) -> Vec<usize> {
        self.labels
            .column_counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(j, _)| j)
            .collect()
    }

    /// Subset of rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        Self::new(
            self.features.select_rows(rows),
            self.labels.select_rows(rows),
            self.feature_names.clone(),
            self.label_names.clone(),
        )
    }

    /// Checks that `other` has the same feature and label layout.
    pub fn check_schema(&self, other: &MultiLabelDataset) -> Result<()> {
        if self.n_features() != other.n_features() {
            return Err(Error::ShapeMismatch {
                context: "feature count",
                expected: self.n_features(),
                found: other.n_features(),
            });
        }
        if self.n_labels() != other.n_labels() {
            return Err(Error::ShapeMismatch {
                context: "label count",
                expected: self.n_labels(),
                found: other.n_labels(),
            });
        }
        Ok(())
    }
}

/// Fold index per sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    fold_of: Vec<usize>,
    k: usize,
}

impl FoldAssignment {
    pub fn new(fold_of: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InfeasibleFolds {
                folds: k,
                samples: fold_of.len(),
            });
        }
        if let Some(&bad) = fold_of.iter().find(|&&f| f >= k) {
            return Err(Error::InvalidConfig(format!(
                "fold index {bad} out of range for {k} folds"
            )));
        }
        Ok(FoldAssignment { fold_of, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn fold_of(&self) -> &[usize] {
        &self.fold_of
    }

    pub fn len(&self) -> usize {
        self.fold_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fold_of.is_empty()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = alloc::vec![0; self.k];
        for &f in &self.fold_of {
            sizes[f] += 1;
        }
        sizes
    }

    /// Rows in `fold`, ascending.
    pub fn members(&self, fold: usize) -> Vec<usize> {
        self.fold_of
            .iter()
            .enumerate()
            .filter(|(_, &f)| f == fold)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Splits into (train, test) with `held_out` as the test fold. Row order is
/// preserved within both parts.
pub fn split(
    dataset: &MultiLabelDataset,
    folds: &FoldAssignment,
    held_out: usize,
) -> Result<(MultiLabelDataset, MultiLabelDataset)> {
    if held_out >= folds.k() {
        return Err(Error::InvalidConfig(format!(
            "held-out fold {held_out} out of range for {} folds",
            folds.k()
        )));
    }
    if folds.len() != dataset.n_samples() {
        return Err(Error::ShapeMismatch {
            context: "fold assignment",
            expected: dataset.n_samples(),
            found: folds.len(),
        });
    }
    let (test, train): (Vec<usize>, Vec<usize>) =
        (0..folds.len()).partition(|&i| folds.fold_of()[i] == held_out);
    if train.is_empty() || test.is_empty() {
        return Err(Error::EmptyPartition(held_out));
    }
    Ok((dataset.select(&train)?, dataset.select(&test)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn toy() -> MultiLabelDataset {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let y = Matrix::from_rows(&[vec![1u8, 0], vec![0, 1], vec![1, 1], vec![0, 0]]).unwrap();
        MultiLabelDataset::from_matrices(x, y).unwrap()
    }

    #[test]
    fn split_preserves_order() {
        let ds = toy();
        let folds = FoldAssignment::new(vec![0, 1, 0, 1], 2).unwrap();
        let (train, test) = split(&ds, &folds, 1).unwrap();
        assert_eq!(train.features().as_slice(), &[0.0, 2.0]);
        assert_eq!(test.features().as_slice(), &[1.0, 3.0]);
    }

    #[test]
    fn split_rejects_empty_train() {
        let ds = toy();
        let folds = FoldAssignment::new(vec![0, 0, 0, 0], 2).unwrap();
        assert_eq!(split(&ds, &folds, 0), Err(Error::EmptyPartition(0)));
        assert!(split(&ds, &folds, 2).is_err());
    }

    #[test]
    fn validation_errors() {
        let x = Matrix::from_rows(&[vec![f64::NAN]]).unwrap();
        let y = Matrix::from_rows(&[vec![1u8, 0]]).unwrap();
        assert!(MultiLabelDataset::from_matrices(x, y).is_err());

        let x = Matrix::from_rows(&[vec![0.0]]).unwrap();
        let y = Matrix::from_rows(&[vec![2u8, 0]]).unwrap();
        assert!(MultiLabelDataset::from_matrices(x, y).is_err());

        let x = Matrix::from_rows(&[vec![0.0]]).unwrap();
        let y = Matrix::from_rows(&[vec![1u8]]).unwrap();
        assert!(MultiLabelDataset::from_matrices(x, y).is_err());
    }

    #[test]
    fn unassigned_labels_are_kept() {
        let ds = toy();
        assert!(ds.unassigned_labels().is_empty());
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let y = Matrix::from_rows(&[vec![1u8, 0, 0], vec![1, 0, 1]]).unwrap();
        let ds = MultiLabelDataset::from_matrices(x, y).unwrap();
        assert_eq!(ds.unassigned_labels(), vec![1]);
        assert_eq!(ds.n_labels(), 3);
    }
}
