//! Multi-label evaluation measures.
//!
//! Precision, recall and F1 use the 0/0 → 0 convention. Macro F1 is the
//! harmonic mean of macro precision and macro recall.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::LabelMatrix;

fn check_shapes(truth: &LabelMatrix, pred: &LabelMatrix) -> Result<()> {
    if truth.rows() != pred.rows() {
        return Err(Error::ShapeMismatch {
            context: "prediction rows",
            expected: truth.rows(),
            found: pred.rows(),
        });
    }
    if truth.cols() != pred.cols() {
        return Err(Error::ShapeMismatch {
            context: "prediction columns",
            expected: truth.cols(),
            found: pred.cols(),
        });
    }
    Ok(())
}

#[inline]
fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 { 0.0 } else { num / den }
}

#[inline]
fn harmonic(p: f64, r: f64) -> f64 {
    ratio(2.0 * p * r, p + r)
}

/// Fraction of rows predicted exactly.
pub fn subset_accuracy(truth: &LabelMatrix, pred: &LabelMatrix) -> Result<f64> {
    check_shapes(truth, pred)?;
    let exact = truth.iter_rows().zip(pred.iter_rows()).filter(|(t, p)| t == p).count();
    Ok(ratio(exact as f64, truth.rows() as f64))
}

/// Fraction of mismatched cells.
pub fn hamming_loss(truth: &LabelMatrix, pred: &LabelMatrix) -> Result<f64> {
    check_shapes(truth, pred)?;
    let wrong = truth.as_slice().iter().zip(pred.as_slice()).filter(|(t, p)| t != p).count();
    Ok(ratio(wrong as f64, truth.as_slice().len() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrfScores {
    pub micro_precision: f64,
    pub micro_recall: f64,
    pub micro_f1: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
}

pub fn micro_macro_prf(truth: &LabelMatrix, pred: &LabelMatrix) -> Result<PrfScores> {
    check_shapes(truth, pred)?;
    let l = truth.cols();
    let mut tp = alloc::vec![0u64; l];
    let mut fp = alloc::vec![0u64; l];
    let mut fn_ = alloc::vec![0u64; l];
    for (t_row, p_row) in truth.iter_rows().zip(pred.iter_rows()) {
        for j in 0..l {
            match (t_row[j], p_row[j]) {
                (1, 1) => tp[j] += 1,
                (0, 1) => fp[j] += 1,
                (1, 0) => fn_[j] += 1,
                _ => {}
            }
        }
    }
    let (stp, sfp, sfn) = (
        tp.iter().sum::<u64>() as f64,
        fp.iter().sum::<u64>() as f64,
        fn_.iter().sum::<u64>() as f64,
    );
    let micro_precision = ratio(stp, stp + sfp);
    let micro_recall = ratio(stp, stp + sfn);
    let (mut p_sum, mut r_sum) = (0.0, 0.0);
    for j in 0..l {
        p_sum += ratio(tp[j] as f64, (tp[j] + fp[j]) as f64);
        r_sum += ratio(tp[j] as f64, (tp[j] + fn_[j]) as f64);
    }
    let macro_precision = ratio(p_sum, l as f64);
    let macro_recall = ratio(r_sum, l as f64);
    Ok(PrfScores {
        micro_precision,
        micro_recall,
        micro_f1: harmonic(micro_precision, micro_recall),
        macro_precision,
        macro_recall,
        macro_f1: harmonic(macro_precision, macro_recall),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub subset_accuracy: f64,
    pub hamming_loss: f64,
    #[serde(flatten)]
    pub prf: PrfScores,
}

impl EvaluationReport {
    /// Measure names in report column order.
    pub const MEASURES: [&'static str; 8] = [
        "subset_accuracy",
        "hamming_loss",
        "micro_precision",
        "micro_recall",
        "micro_f1",
        "macro_precision",
        "macro_recall",
        "macro_f1",
    ];

    pub fn values(&self) -> [f64; 8] {
        let p = &self.prf;
        [
            self.subset_accuracy,
            self.hamming_loss,
            p.micro_precision,
            p.micro_recall,
            p.micro_f1,
            p.macro_precision,
            p.macro_recall,
            p.macro_f1,
        ]
    }
}

pub fn evaluate(truth: &LabelMatrix, pred: &LabelMatrix) -> Result<EvaluationReport> {
    Ok(EvaluationReport {
        subset_accuracy: subset_accuracy(truth, pred)?,
        hamming_loss: hamming_loss(truth, pred)?,
        prf: micro_macro_prf(truth, pred)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use alloc::vec;

    fn complement(m: &LabelMatrix) -> LabelMatrix {
        Matrix::from_vec(m.rows(), m.cols(), m.as_slice().iter().map(|v| 1 - v).collect()).unwrap()
    }

    #[test]
    fn identical_and_complement() {
        let y = Matrix::from_rows(&[vec![1u8, 0, 1], vec![0, 1, 0]]).unwrap();
        let r = evaluate(&y, &y).unwrap();
        assert_eq!(r.subset_accuracy, 1.0);
        assert_eq!(r.hamming_loss, 0.0);
        assert!(r.values()[2..].iter().all(|&v| v == 1.0));
        let c = complement(&y);
        assert_eq!(subset_accuracy(&y, &c).unwrap(), 0.0);
        assert_eq!(hamming_loss(&y, &c).unwrap(), 1.0);
    }

    #[test]
    fn half_exact() {
        let t = Matrix::from_rows(&[vec![1u8, 0], vec![0, 1], vec![1, 1], vec![0, 0]]).unwrap();
        let p = Matrix::from_rows(&[vec![1u8, 0], vec![1, 1], vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(subset_accuracy(&t, &p).unwrap(), 0.5);
    }

    #[test]
    fn one_cell_in_twenty() {
        let t = Matrix::from_vec(4, 5, vec![0u8; 20]).unwrap();
        let mut p = t.clone();
        p.set(2, 3, 1);
        assert!((hamming_loss(&t, &p).unwrap() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn empty_prediction_convention() {
        let t = Matrix::from_rows(&[vec![1u8, 0], vec![1, 1]]).unwrap();
        let p = Matrix::zeros(2, 2);
        let s = micro_macro_prf(&t, &p).unwrap();
        assert_eq!(s.micro_precision, 0.0);
        assert_eq!(s.micro_recall, 0.0);
        assert_eq!(s.macro_precision, 0.0);
        assert_eq!(s.macro_f1, 0.0);
    }

    #[test]
    fn shape_mismatch() {
        let a = Matrix::<u8>::zeros(2, 3);
        let b = Matrix::<u8>::zeros(3, 3);
        assert!(subset_accuracy(&a, &b).is_err());
        assert!(hamming_loss(&a, &Matrix::zeros(2, 2)).is_err());
        assert!(micro_macro_prf(&a, &b).is_err());
    }
}
