//! Iterative stratification for multi-label k-fold splits.
//!
//! Evidence is counted per label pair (optionally also per single label).
//! The rarest evidence still carrying unassigned samples is handled first;
//! each of its samples goes to the fold with the largest remaining demand
//! for that evidence, then the largest remaining capacity, then the lowest
//! index. Samples without any evidence are placed by capacity alone.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::FoldAssignment;
use crate::error::{Error, Result};
use crate::matrix::LabelMatrix;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratifyOptions {
    /// Also stratify on single labels, not only on label pairs.
    pub include_singletons: bool,
}

impl Default for StratifyOptions {
    fn default() -> Self {
        StratifyOptions {
            include_singletons: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Evidence {
    Single(usize),
    Pair(usize, usize),
}

fn row_evidence(row: &[u8], opts: StratifyOptions) -> Vec<Evidence> {
    let active: Vec<usize> = (0..row.len()).filter(|&j| row[j] == 1).collect();
    let mut ev = Vec::new();
    if opts.include_singletons {
        ev.extend(active.iter().map(|&j| Evidence::Single(j)));
    }
    for (a, &s) in active.iter().enumerate() {
        for &t in &active[a + 1..] {
            ev.push(Evidence::Pair(s, t));
        }
    }
    ev
}

pub fn iterative_stratification(labels: &LabelMatrix, k: usize, seed: u64) -> Result<FoldAssignment> {
    iterative_stratification_with(labels, k, seed, StratifyOptions::default())
}

pub fn iterative_stratification_with(
    labels: &LabelMatrix,
    k: usize,
    seed: u64,
    opts: StratifyOptions,
) -> Result<FoldAssignment> {
    let n = labels.rows();
    if k < 2 || k > n {
        return Err(Error::InfeasibleFolds { folds: k, samples: n });
    }

    // Row processing order is the only use of the seed.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::seeded(seed));

    let evidence_of: Vec<Vec<Evidence>> = (0..n).map(|i| row_evidence(labels.row(i), opts)).collect();

    // evidence -> rows (in shuffled order) still unassigned
    let mut pending: BTreeMap<Evidence, Vec<usize>> = BTreeMap::new();
    for &i in &order {
        for &e in &evidence_of[i] {
            pending.entry(e).or_default().push(i);
        }
    }

    let ratio = 1.0 / k as f64;
    let mut capacity: Vec<f64> = alloc::vec![n as f64 * ratio; k];
    let mut demand: BTreeMap<Evidence, Vec<f64>> = pending
        .iter()
        .map(|(&e, rows)| (e, alloc::vec![rows.len() as f64 * ratio; k]))
        .collect();

    let mut live: BTreeMap<Evidence, usize> = pending.iter().map(|(&e, rows)| (e, rows.len())).collect();
    let mut fold_of: Vec<Option<usize>> = alloc::vec![None; n];

    // Rarest evidence with unassigned rows; ties resolved by evidence order.
    while let Some((_, evidence)) = live.iter().filter(|(_, &c)| c > 0).map(|(&e, &c)| (c, e)).min() {
        let rows: Vec<usize> = pending[&evidence]
            .iter()
            .copied()
            .filter(|&i| fold_of[i].is_none())
            .collect();
        for i in rows {
            let want = &demand[&evidence];
            let fold = best_fold(k, |f| (want[f], capacity[f]));
            fold_of[i] = Some(fold);
            capacity[fold] -= 1.0;
            for e in &evidence_of[i] {
                if let Some(d) = demand.get_mut(e) {
                    d[fold] -= 1.0;
                }
                if let Some(c) = live.get_mut(e) {
                    *c -= 1;
                }
            }
        }
    }

    for &i in &order {
        if fold_of[i].is_none() {
            let fold = best_fold(k, |f| (capacity[f], 0.0));
            fold_of[i] = Some(fold);
            capacity[fold] -= 1.0;
        }
    }

    let folds = FoldAssignment::new(fold_of.into_iter().map(|f| f.unwrap_or(0)).collect(), k)?;
    if let Some(empty) = folds.fold_sizes().iter().position(|&s| s == 0) {
        return Err(Error::EmptyPartition(empty));
    }
    Ok(folds)
}

/// Fold maximising the key lexicographically; the lowest index wins ties.
fn best_fold(k: usize, key: impl Fn(usize) -> (f64, f64)) -> usize {
    let mut best = 0;
    for f in 1..k {
        let (a, b) = key(f);
        let (ba, bb) = key(best);
        if a > ba || (a == ba && b > bb) {
            best = f;
        }
    }
    best
}

/// Uniform random split into `k` folds of (near) equal size.
pub fn random_folds(n: usize, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 || k > n {
        return Err(Error::InfeasibleFolds { folds: k, samples: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::seeded(seed));
    let mut fold_of = alloc::vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        fold_of[i] = pos % k;
    }
    FoldAssignment::new(fold_of, k)
}

/// Mean over folds and labels of `|freq_fold(j) - freq_all(j)|`.
pub fn label_frequency_deviation(labels: &LabelMatrix, folds: &FoldAssignment) -> f64 {
    let n = labels.rows() as f64;
    let l = labels.cols();
    let overall: Vec<f64> = labels.column_counts().iter().map(|&c| c as f64 / n).collect();
    let mut total = 0.0;
    for f in 0..folds.k() {
        let rows = folds.members(f);
        let size = rows.len() as f64;
        for (j, &p) in overall.iter().enumerate() {
            let count = rows.iter().filter(|&&i| labels.get(i, j) == 1).count() as f64;
            total += libm::fabs(count / size - p);
        }
    }
    total / (folds.k() * l) as f64
}
