use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Per-column zero-mean, unit-variance scaling fitted on training data.
/// Constant columns are centered and left unscaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: &Matrix<f64>) -> Self {
        let (n, m) = (x.rows(), x.cols());
        let mut means = alloc::vec![0.0; m];
        for row in x.iter_rows() {
            means.iter_mut().zip(row).for_each(|(a, v)| *a += v);
        }
        let nf = n.max(1) as f64;
        means.iter_mut().for_each(|a| *a /= nf);
        let mut var = alloc::vec![0.0; m];
        for row in x.iter_rows() {
            for ((s, v), mu) in var.iter_mut().zip(row).zip(&means) {
                let d = v - mu;
                *s += d * d;
            }
        }
        let scales = var
            .into_iter()
            .map(|s| {
                let sd = libm::sqrt(s / nf);
                if sd > 1e-12 { sd } else { 1.0 }
            })
            .collect();
        Standardizer { means, scales }
    }

    pub fn identity(m: usize) -> Self {
        Standardizer {
            means: alloc::vec![0.0; m],
            scales: alloc::vec![1.0; m],
        }
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn transform(&self, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        if x.cols() != self.dim() {
            return Err(Error::ShapeMismatch {
                context: "standardizer columns",
                expected: self.dim(),
                found: x.cols(),
            });
        }
        let mut out = x.clone();
        for i in 0..out.rows() {
            for ((v, mu), s) in out.row_mut(i).iter_mut().zip(&self.means).zip(&self.scales) {
                *v = (*v - mu) / s;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn unit_variance_and_constant_columns() {
        let x = Matrix::from_rows(&[vec![1.0, 5.0], vec![3.0, 5.0]]).unwrap();
        let s = Standardizer::fit(&x);
        let t = s.transform(&x).unwrap();
        assert_eq!(t.row(0), &[-1.0, 0.0]);
        assert_eq!(t.row(1), &[1.0, 0.0]);
        assert!(s.transform(&Matrix::zeros(1, 3)).is_err());
    }
}
