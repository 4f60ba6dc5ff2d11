//! Walker/Vose alias tables for O(1) sampling from discrete distributions.

use alloc::vec::Vec;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        let total: f64 = weights.iter().sum();
        if n == 0 || !(total > 0.0) || weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::ZeroWeights);
        }
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut prob = alloc::vec![0.0; n];
        let mut alias: Vec<usize> = (0..n).collect();
        let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| scaled[i] < 1.0);
        while let (Some(s), Some(&g)) = (small.pop(), large.last()) {
            prob[s] = scaled[s];
            alias[s] = g;
            scaled[g] -= 1.0 - scaled[s];
            if scaled[g] < 1.0 {
                large.pop();
                small.push(g);
            }
        }
        // leftovers are 1 up to rounding
        for i in large.into_iter().chain(small) {
            prob[i] = 1.0;
        }
        Ok(AliasTable { prob, alias })
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prob.is_empty()
    }

    /// Maps two uniforms in `[0, 1)` to an outcome.
    #[inline]
    pub fn draw(&self, u1: f64, u2: f64) -> usize {
        let n = self.prob.len();
        let column = ((u1 * n as f64) as usize).min(n - 1);
        if u2 < self.prob[column] {
            column
        } else {
            self.alias[column]
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u1: f64 = rng.gen();
        let u2: f64 = rng.gen();
        self.draw(u1, u2)
    }

    /// Probability of each outcome implied by the table.
    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.prob.len() as f64;
        let mut p = alloc::vec![0.0; self.prob.len()];
        for (i, (&keep, &other)) in self.prob.iter().zip(&self.alias).enumerate() {
            p[i] += keep / n;
            p[other] += (1.0 - keep) / n;
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use alloc::vec;

    #[test]
    fn uniform_pair() {
        let t = AliasTable::new(&[1.0, 1.0]).unwrap();
        let p = t.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn three_to_one_frequency() {
        let t = AliasTable::new(&[3.0, 1.0]).unwrap();
        let mut r = rng::seeded(42);
        let draws = 1_000_000;
        let zeros = (0..draws).filter(|_| t.sample(&mut r) == 0).count();
        let freq = zeros as f64 / draws as f64;
        assert!((0.747..=0.753).contains(&freq), "{freq}");
    }

    #[test]
    fn zero_weight_never_drawn() {
        let t = AliasTable::new(&[0.0, 5.0]).unwrap();
        let mut r = rng::seeded(1);
        assert!((0..10_000).all(|_| t.sample(&mut r) == 1));
    }

    #[test]
    fn rejects_degenerate_weights() {
        assert_eq!(AliasTable::new(&[0.0, 0.0]), Err(Error::ZeroWeights));
        assert_eq!(AliasTable::new(&[]), Err(Error::ZeroWeights));
        assert!(AliasTable::new(&[1.0, -1.0]).is_err());
    }

    #[test]
    fn implied_distribution_matches_weights() {
        let w = vec![0.1, 4.0, 2.5, 0.0, 7.0, 1.0];
        let total: f64 = w.iter().sum();
        let t = AliasTable::new(&w).unwrap();
        for (p, wi) in t.probabilities().iter().zip(&w) {
            assert!((p - wi / total).abs() < 1e-12);
        }
    }
}
