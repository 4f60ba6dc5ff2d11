//! ML-kNN: per-label MAP decisions from the number of positive neighbours,
//! with Laplace-smoothed priors and neighbour-count likelihoods estimated by
//! leave-one-out on the training set.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{LabelMatrix, Matrix};

pub const DEFAULT_K: usize = 5;
pub const DEFAULT_SMOOTHING: f64 = 1.0;

#[inline]
fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Indices of the `k` rows of `store` nearest to `query` (Euclidean),
/// ordered by distance then row index. `exclude` drops one row (used for
/// leave-one-out within the training set).
pub fn knn_search(query: &[f64], store: &Matrix<f64>, k: usize, exclude: Option<usize>) -> Result<Vec<usize>> {
    let available = store.rows() - usize::from(exclude.is_some_and(|e| e < store.rows()));
    if k == 0 || k > available {
        return Err(Error::TooFewSamples {
            needed: k,
            got: available,
        });
    }
    if query.len() != store.cols() {
        return Err(Error::ShapeMismatch {
            context: "knn query length",
            expected: store.cols(),
            found: query.len(),
        });
    }
    let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
    for (i, row) in store.iter_rows().enumerate() {
        if Some(i) == exclude {
            continue;
        }
        let d = squared_distance(query, row);
        if best.len() == k && d >= best[k - 1].0 {
            // later rows lose ties to earlier ones
            continue;
        }
        let pos = best.partition_point(|&(bd, bi)| bd < d || (bd == d && bi < i));
        best.insert(pos, (d, i));
        best.truncate(k);
    }
    Ok(best.into_iter().map(|(_, i)| i).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlknnModel {
    train: Matrix<f64>,
    labels: LabelMatrix,
    k: usize,
    smoothing: f64,
    /// `P(H_j)`
    prior: Vec<f64>,
    /// `P(C_j = c | H_j)`, `l × (k+1)`
    cond_pos: Matrix<f64>,
    /// `P(C_j = c | ¬H_j)`, `l × (k+1)`
    cond_neg: Matrix<f64>,
}

/// Binary decisions and posterior scores for a batch of queries.
#[derive(Debug, Clone, PartialEq)]
pub struct MlknnPrediction {
    pub assignments: LabelMatrix,
    pub scores: Matrix<f64>,
}

impl MlknnModel {
    /// Fits with brute-force leave-one-out neighbour search.
    pub fn fit(x: &Matrix<f64>, y: &LabelMatrix, k: usize, smoothing: f64) -> Result<Self> {
        Self::check_fit_inputs(x, y, k, smoothing)?;
        let neighbors = (0..x.rows())
            .map(|i| knn_search(x.row(i), x, k, Some(i)))
            .collect::<Result<Vec<_>>>()?;
        Self::fit_with_neighbors(x, y, k, smoothing, &neighbors)
    }

    pub fn check_fit_inputs(x: &Matrix<f64>, y: &LabelMatrix, k: usize, smoothing: f64) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidConfig("k must be >= 1".into()));
        }
        if !(smoothing > 0.0) {
            return Err(Error::InvalidConfig("smoothing must be positive".into()));
        }
        if x.rows() != y.rows() {
            return Err(Error::ShapeMismatch {
                context: "ml-knn label rows",
                expected: x.rows(),
                found: y.rows(),
            });
        }
        if x.rows() <= k {
            return Err(Error::TooFewSamples { needed: k, got: x.rows() });
        }
        Ok(())
    }

    /// Fits from precomputed leave-one-out neighbour lists (`neighbors[i]`
    /// must not contain `i`).
    pub fn fit_with_neighbors(x: &Matrix<f64>, y: &LabelMatrix, k: usize, smoothing: f64, neighbors: &[Vec<usize>]) -> Result<Self> {
        Self::check_fit_inputs(x, y, k, smoothing)?;
        let (n, l) = (y.rows(), y.cols());
        let s = smoothing;
        let prior = y
            .column_counts()
            .iter()
            .map(|&c| (s + c as f64) / (2.0 * s + n as f64))
            .collect();

        let mut pos_counts = Matrix::<f64>::zeros(l, k + 1);
        let mut neg_counts = Matrix::<f64>::zeros(l, k + 1);
        let mut c = alloc::vec![0usize; l];
        for i in 0..n {
            neighbor_label_counts(y, &neighbors[i], &mut c);
            for j in 0..l {
                let table = if y.get(i, j) == 1 { &mut pos_counts } else { &mut neg_counts };
                let v = table.get(j, c[j]);
                table.set(j, c[j], v + 1.0);
            }
        }
        let normalize = |counts: &Matrix<f64>| {
            let mut out = Matrix::zeros(l, k + 1);
            for j in 0..l {
                let total: f64 = counts.row(j).iter().sum();
                let denom = s * (k + 1) as f64 + total;
                for (o, &c) in out.row_mut(j).iter_mut().zip(counts.row(j)) {
                    *o = (s + c) / denom;
                }
            }
            out
        };
        Ok(MlknnModel {
            train: x.clone(),
            labels: y.clone(),
            k,
            smoothing,
            prior,
            cond_pos: normalize(&pos_counts),
            cond_neg: normalize(&neg_counts),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn n_features(&self) -> usize {
        self.train.cols()
    }

    pub fn n_labels(&self) -> usize {
        self.labels.cols()
    }

    pub fn training_inputs(&self) -> &Matrix<f64> {
        &self.train
    }

    pub fn training_labels(&self) -> &LabelMatrix {
        &self.labels
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn likelihood_positive(&self, label: usize, count: usize) -> f64 {
        self.cond_pos.get(label, count)
    }

    pub fn likelihood_negative(&self, label: usize, count: usize) -> f64 {
        self.cond_neg.get(label, count)
    }

    /// Neighbours of a query among the training rows.
    pub fn neighbors(&self, query: &[f64]) -> Result<Vec<usize>> {
        knn_search(query, &self.train, self.k, None)
    }

    /// Decisions and scores for one query given its neighbours.
    pub fn decide(&self, neighbors: &[usize], assignments: &mut [u8], scores: &mut [f64]) {
        let l = self.labels.cols();
        let mut c = alloc::vec![0usize; l];
        neighbor_label_counts(&self.labels, neighbors, &mut c);
        for j in 0..l {
            let pos = self.prior[j] * self.cond_pos.get(j, c[j]);
            let neg = (1.0 - self.prior[j]) * self.cond_neg.get(j, c[j]);
            let assign = pos >= neg;
            let mut score = pos / (pos + neg);
            if !assign && score >= 0.5 {
                score = 0.5 - f64::EPSILON / 4.0;
            }
            assignments[j] = u8::from(assign);
            scores[j] = score;
        }
    }

    pub fn predict(&self, queries: &Matrix<f64>) -> Result<MlknnPrediction> {
        if queries.cols() != self.train.cols() {
            return Err(Error::ShapeMismatch {
                context: "ml-knn query columns",
                expected: self.train.cols(),
                found: queries.cols(),
            });
        }
        let l = self.labels.cols();
        let mut assignments = Matrix::zeros(queries.rows(), l);
        let mut scores = Matrix::zeros(queries.rows(), l);
        for i in 0..queries.rows() {
            let nn = self.neighbors(queries.row(i))?;
            self.decide(&nn, assignments.row_mut(i), scores.row_mut(i));
        }
        Ok(MlknnPrediction { assignments, scores })
    }
}

fn neighbor_label_counts(y: &LabelMatrix, neighbors: &[usize], out: &mut [usize]) {
    out.iter_mut().for_each(|c| *c = 0);
    for &nb in neighbors {
        for (c, &v) in out.iter_mut().zip(y.row(nb)) {
            *c += v as usize;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn nearest_of_three() {
        let store = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![5.0]]).unwrap();
        assert_eq!(knn_search(&[0.9], &store, 1, None).unwrap(), vec![1]);
        assert_eq!(knn_search(&[0.9], &store, 3, None).unwrap(), vec![1, 0, 2]);
    }

    #[test]
    fn leave_one_out_excludes_self() {
        let store = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![5.0]]).unwrap();
        assert_eq!(knn_search(&[1.0], &store, 1, Some(1)).unwrap(), vec![0]);
        assert!(knn_search(&[1.0], &store, 3, Some(1)).is_err());
    }

    #[test]
    fn ties_prefer_lower_index() {
        let store = Matrix::from_rows(&[vec![1.0], vec![-1.0], vec![1.0], vec![-1.0]]).unwrap();
        assert_eq!(knn_search(&[0.0], &store, 2, None).unwrap(), vec![0, 1]);
        assert_eq!(knn_search(&[0.0], &store, 4, None).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn priors_with_smoothing() {
        let x = Matrix::from_vec(8, 1, (0..8).map(|i| i as f64).collect()).unwrap();
        let mut y = Matrix::zeros(8, 2);
        for i in 0..8 {
            y.set(i, 0, 1u8);
        }
        let m = MlknnModel::fit(&x, &y, 3, 1.0).unwrap();
        assert!((m.prior()[0] - 0.9).abs() < 1e-15);
        assert!((m.prior()[1] - 0.1).abs() < 1e-15);
        for j in 0..2 {
            let pos: f64 = (0..=3).map(|c| m.likelihood_positive(j, c)).sum();
            let neg: f64 = (0..=3).map(|c| m.likelihood_negative(j, c)).sum();
            assert!((pos - 1.0).abs() < 1e-12 && (neg - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hand_counted_conditionals() {
        // two classes, each a duplicated pair; k = 1 so every sample's
        // leave-one-out neighbour is its twin
        let x = Matrix::from_rows(&[vec![0.0], vec![0.0], vec![10.0], vec![10.0]]).unwrap();
        let y = Matrix::from_rows(&[vec![1u8, 0], vec![1, 0], vec![0, 1], vec![0, 1]]).unwrap();
        let m = MlknnModel::fit(&x, &y, 1, 1.0).unwrap();
        // label 0: positives (rows 0,1) both see count 1; negatives see 0
        assert!((m.likelihood_positive(0, 1) - 3.0 / 4.0).abs() < 1e-15);
        assert!((m.likelihood_positive(0, 0) - 1.0 / 4.0).abs() < 1e-15);
        assert!((m.likelihood_negative(0, 0) - 3.0 / 4.0).abs() < 1e-15);
        assert!((m.likelihood_negative(0, 1) - 1.0 / 4.0).abs() < 1e-15);
        let p = m.predict(&Matrix::from_rows(&[vec![0.5], vec![9.0]]).unwrap()).unwrap();
        assert_eq!(p.assignments.row(0), &[1, 0]);
        assert_eq!(p.assignments.row(1), &[0, 1]);
    }

    #[test]
    fn unanimous_evidence() {
        let x = Matrix::from_vec(6, 2, vec![0.0; 12]).unwrap();
        let y = Matrix::from_vec(6, 3, vec![1u8; 18]).unwrap();
        let m = MlknnModel::fit(&x, &y, 5, 1.0).unwrap();
        let p = m.predict(&Matrix::from_rows(&[vec![3.0, -1.0], vec![0.0, 0.0]]).unwrap()).unwrap();
        assert!(p.assignments.as_slice().iter().all(|&v| v == 1));
    }

    #[test]
    fn never_positive_label_has_floor_prior() {
        let x = Matrix::from_vec(4, 1, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let y = Matrix::from_rows(&[vec![1u8, 0], vec![1, 0], vec![0, 0], vec![1, 0]]).unwrap();
        let m = MlknnModel::fit(&x, &y, 1, 1.0).unwrap();
        assert!((m.prior()[1] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn fit_errors() {
        let x = Matrix::from_vec(3, 1, vec![0.0, 1.0, 2.0]).unwrap();
        let y = Matrix::from_vec(3, 2, vec![1u8; 6]).unwrap();
        assert!(MlknnModel::fit(&x, &y, 3, 1.0).is_err());
        assert!(MlknnModel::fit(&x, &y, 0, 1.0).is_err());
        let m = MlknnModel::fit(&x, &y, 2, 1.0).unwrap();
        assert!(m.predict(&Matrix::zeros(1, 2)).is_err());
    }
}
