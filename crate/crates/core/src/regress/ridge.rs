use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Affine multi-output model `x ↦ xW + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeModel {
    /// `m × d`
    pub coefficients: Matrix<f64>,
    pub intercept: Vec<f64>,
    pub lambda: f64,
}

impl RidgeModel {
    pub fn predict(&self, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        let (m, d) = (self.coefficients.rows(), self.coefficients.cols());
        if x.cols() != m {
            return Err(Error::ShapeMismatch {
                context: "ridge input columns",
                expected: m,
                found: x.cols(),
            });
        }
        let mut out = Matrix::zeros(x.rows(), d);
        for i in 0..x.rows() {
            let dst = out.row_mut(i);
            dst.copy_from_slice(&self.intercept);
            for (k, &xv) in x.row(i).iter().enumerate() {
                if xv != 0.0 {
                    for (o, w) in dst.iter_mut().zip(self.coefficients.row(k)) {
                        *o += xv * w;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Minimises `‖XW + b − E‖² + λ‖W‖²` with an unpenalised intercept by a
/// Cholesky factorisation of the centered normal equations.
pub fn fit_ridge(x: &Matrix<f64>, e: &Matrix<f64>, lambda: f64) -> Result<RidgeModel> {
    let (n, m, d) = (x.rows(), x.cols(), e.cols());
    if n == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    if e.rows() != n {
        return Err(Error::ShapeMismatch {
            context: "ridge target rows",
            expected: n,
            found: e.rows(),
        });
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidConfig("ridge penalty must be non-negative".into()));
    }
    let x_mean = column_means(x);
    let e_mean = column_means(e);

    let mut gram = Matrix::zeros(m, m);
    let mut cross = Matrix::zeros(m, d);
    let mut xc = alloc::vec![0.0; m];
    let mut ec = alloc::vec![0.0; d];
    for i in 0..n {
        xc.iter_mut().zip(x.row(i)).zip(&x_mean).for_each(|((c, v), mu)| *c = v - mu);
        ec.iter_mut().zip(e.row(i)).zip(&e_mean).for_each(|((c, v), mu)| *c = v - mu);
        for a in 0..m {
            let xa = xc[a];
            if xa == 0.0 {
                continue;
            }
            let g = gram.row_mut(a);
            for b in a..m {
                g[b] += xa * xc[b];
            }
            for (c, ev) in cross.row_mut(a).iter_mut().zip(&ec) {
                *c += xa * ev;
            }
        }
    }
    for a in 0..m {
        for b in 0..a {
            let v = gram.get(b, a);
            gram.set(a, b, v);
        }
        let diag = gram.get(a, a);
        gram.set(a, a, diag + lambda);
    }

    let coefficients = cholesky_solve(gram, cross)?;
    let intercept = (0..d)
        .map(|c| e_mean[c] - (0..m).map(|k| x_mean[k] * coefficients.get(k, c)).sum::<f64>())
        .collect();
    Ok(RidgeModel {
        coefficients,
        intercept,
        lambda,
    })
}

fn column_means(x: &Matrix<f64>) -> Vec<f64> {
    let mut means = alloc::vec![0.0; x.cols()];
    for row in x.iter_rows() {
        means.iter_mut().zip(row).for_each(|(a, v)| *a += v);
    }
    let n = x.rows().max(1) as f64;
    means.iter_mut().for_each(|a| *a /= n);
    means
}

/// Solves `A X = B` for symmetric positive definite `A`.
pub fn cholesky_solve(mut a: Matrix<f64>, mut b: Matrix<f64>) -> Result<Matrix<f64>> {
    let m = a.rows();
    let max_diag = (0..m).map(|i| a.get(i, i)).fold(0.0f64, f64::max);
    let tol = 1e-12 * max_diag.max(f64::MIN_POSITIVE) * m.max(1) as f64;
    // lower factor overwrites the lower triangle of `a`
    for j in 0..m {
        let mut diag = a.get(j, j);
        for k in 0..j {
            let l = a.get(j, k);
            diag -= l * l;
        }
        if !(diag > tol) {
            return Err(Error::Singular);
        }
        let ljj = libm::sqrt(diag);
        a.set(j, j, ljj);
        for i in j + 1..m {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= a.get(i, k) * a.get(j, k);
            }
            a.set(i, j, s / ljj);
        }
    }
    let cols = b.cols();
    // forward: L Y = B
    for i in 0..m {
        for k in 0..i {
            let l = a.get(i, k);
            for c in 0..cols {
                let v = b.get(i, c) - l * b.get(k, c);
                b.set(i, c, v);
            }
        }
        let lii = a.get(i, i);
        b.row_mut(i).iter_mut().for_each(|v| *v /= lii);
    }
    // backward: Lᵀ X = Y
    for i in (0..m).rev() {
        for k in i + 1..m {
            let l = a.get(k, i);
            for c in 0..cols {
                let v = b.get(i, c) - l * b.get(k, c);
                b.set(i, c, v);
            }
        }
        let lii = a.get(i, i);
        b.row_mut(i).iter_mut().for_each(|v| *v /= lii);
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn exact_line() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let e = x.clone();
        let m = fit_ridge(&x, &e, 0.0).unwrap();
        assert!((m.coefficients.get(0, 0) - 1.0).abs() < 1e-12);
        assert!(m.intercept[0].abs() < 1e-12);
    }

    #[test]
    fn identity_inputs() {
        let mut x = Matrix::zeros(3, 3);
        for i in 0..3 {
            x.set(i, i, 1.0);
        }
        let e = Matrix::from_rows(&[vec![1.0, -2.0], vec![0.5, 4.0], vec![3.0, 0.0]]).unwrap();
        // centered identity has rank 2: unpenalised fit is not unique
        assert_eq!(fit_ridge(&x, &e, 0.0), Err(Error::Singular));
        let m = fit_ridge(&x, &e, 1e-12).unwrap();
        let p = m.predict(&x).unwrap();
        for (a, b) in p.as_slice().iter().zip(e.as_slice()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_model_predicts_intercept() {
        let model = RidgeModel {
            coefficients: Matrix::zeros(2, 3),
            intercept: vec![1.0, 2.0, 3.0],
            lambda: 1.0,
        };
        let x = Matrix::from_rows(&[vec![5.0, -1.0], vec![0.0, 7.0]]).unwrap();
        let p = model.predict(&x).unwrap();
        assert_eq!(p.row(0), &[1.0, 2.0, 3.0]);
        assert_eq!(p.row(1), &[1.0, 2.0, 3.0]);
        assert_eq!(model.predict(&Matrix::zeros(0, 2)).unwrap().rows(), 0);
        assert!(model.predict(&Matrix::zeros(1, 3)).is_err());
    }
}
