//! Random forest of multi-output CART regression trees.

use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub trees: usize,
    /// `None` grows until leaves are pure or too small to split.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// `None` means `⌈m / 3⌉`.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            trees: 100,
            max_depth: None,
            min_samples_leaf: 1,
            features_per_split: None,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl ForestConfig {
    pub fn mtry(&self, m: usize) -> usize {
        self.features_per_split.unwrap_or_else(|| m.div_ceil(3)).clamp(1, m.max(1))
    }

    pub fn validate(&self) -> Result<()> {
        if self.trees == 0 {
            return Err(Error::InvalidConfig("forest needs at least one tree".into()));
        }
        if self.min_samples_leaf == 0 {
            return Err(Error::InvalidConfig("min_samples_leaf must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Start of the leaf's training rows in `Tree::leaf_rows`.
        offset: usize,
        samples: usize,
    },
}

/// A fitted tree. Leaves keep the (bootstrap) training rows that reached
/// them rather than their means, so a forest of fully grown trees over a
/// wide target stays small.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
    pub leaf_rows: Vec<u32>,
}

impl Tree {
    /// Training rows of the leaf that `x` falls into.
    pub fn leaf_for(&self, x: &[f64]) -> &[u32] {
        let mut node = 0;
        loop {
            match self.nodes[node] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => node = if x[feature] <= threshold { left } else { right },
                TreeNode::Leaf { offset, samples } => return &self.leaf_rows[offset..offset + samples],
            }
        }
    }

    /// Adds the tree's prediction for `x` (the leaf mean of `targets`) to `out`.
    pub fn add_prediction(&self, x: &[f64], targets: &Matrix<f64>, out: &mut [f64], scratch: &mut [f64]) {
        let rows = self.leaf_for(x);
        leaf_mean(rows, targets, scratch);
        out.iter_mut().zip(scratch.iter()).for_each(|(o, v)| *o += v);
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, i: usize) -> usize {
            match t.nodes[i] {
                TreeNode::Split { left, right, .. } => 1 + go(t, left).max(go(t, right)),
                TreeNode::Leaf { .. } => 0,
            }
        }
        go(self, 0)
    }
}

fn leaf_mean(rows: &[u32], targets: &Matrix<f64>, out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for &i in rows {
        out.iter_mut().zip(targets.row(i as usize)).for_each(|(o, v)| *o += v);
    }
    let n = rows.len() as f64;
    out.iter_mut().for_each(|o| *o /= n);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<Tree>,
    /// Training targets referenced by the leaves.
    pub targets: Matrix<f64>,
    pub config: ForestConfig,
    pub n_features: usize,
    pub n_outputs: usize,
    /// Out-of-bag mean squared error (per output), when bootstrapping.
    pub oob_mse: Option<f64>,
}

impl ForestModel {
    /// Prediction of tree `t` alone.
    pub fn tree_prediction(&self, t: usize, x: &[f64]) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.n_outputs];
        leaf_mean(self.trees[t].leaf_for(x), &self.targets, &mut out);
        out
    }

    pub fn predict_row(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        let mut scratch = alloc::vec![0.0; self.n_outputs];
        for tree in &self.trees {
            tree.add_prediction(x, &self.targets, out, &mut scratch);
        }
        let t = self.trees.len() as f64;
        out.iter_mut().for_each(|o| *o /= t);
    }

    pub fn predict(&self, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        if x.cols() != self.n_features {
            return Err(Error::ShapeMismatch {
                context: "forest input columns",
                expected: self.n_features,
                found: x.cols(),
            });
        }
        let mut out = Matrix::zeros(x.rows(), self.n_outputs);
        for i in 0..x.rows() {
            self.predict_row(x.row(i), out.row_mut(i));
        }
        Ok(out)
    }
}

/// One fitted tree plus its bootstrap multiplicities.
#[derive(Debug, Clone)]
pub struct ForestMember {
    pub tree: Tree,
    pub in_bag: Vec<u32>,
}

struct Builder<'a> {
    x: &'a Matrix<f64>,
    y: &'a Matrix<f64>,
    min_leaf: usize,
    max_depth: Option<usize>,
    mtry: usize,
    features: Vec<usize>,
    nodes: Vec<TreeNode>,
    leaf_rows: Vec<u32>,
    sorted: Vec<(f64, usize)>,
    left_sum: Vec<f64>,
    rng: rng::Rng,
}

struct SplitChoice {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl Builder<'_> {
    fn target_sum(&self, idx: &[usize]) -> Vec<f64> {
        let mut sum = alloc::vec![0.0; self.y.cols()];
        for &i in idx {
            sum.iter_mut().zip(self.y.row(i)).for_each(|(s, v)| *s += v);
        }
        sum
    }

    fn push_leaf(&mut self, idx: &[usize]) -> usize {
        let offset = self.leaf_rows.len();
        self.leaf_rows.extend(idx.iter().map(|&i| i as u32));
        self.nodes.push(TreeNode::Leaf {
            offset,
            samples: idx.len(),
        });
        self.nodes.len() - 1
    }

    fn is_pure(&self, idx: &[usize]) -> bool {
        let first = self.y.row(idx[0]);
        idx[1..].iter().all(|&i| self.y.row(i) == first)
    }

    /// Best split by `|S_L|²/n_L + |S_R|²/n_R` (equivalently, least summed
    /// squared error over all outputs).
    fn best_split(&mut self, idx: &[usize], total: &[f64]) -> Option<SplitChoice> {
        let n = idx.len();
        let d = self.y.cols();
        let parent = total.iter().map(|s| s * s).sum::<f64>() / n as f64;
        let mut best: Option<SplitChoice> = None;
        self.features.shuffle(&mut self.rng);
        let mut informative = 0;
        for fi in 0..self.features.len() {
            if informative >= self.mtry {
                break;
            }
            let f = self.features[fi];
            self.sorted.clear();
            self.sorted.extend(idx.iter().map(|&i| (self.x.get(i, f), i)));
            self.sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            if self.sorted[0].0 == self.sorted[n - 1].0 {
                continue;
            }
            informative += 1;
            self.left_sum.iter_mut().for_each(|s| *s = 0.0);
            for p in 0..n - 1 {
                let row = self.y.row(self.sorted[p].1);
                let mut left_sq = 0.0;
                for (s, v) in self.left_sum.iter_mut().zip(row) {
                    *s += v;
                    left_sq += *s * *s;
                }
                let (lo, hi) = (self.sorted[p].0, self.sorted[p + 1].0);
                let n_left = p + 1;
                let n_right = n - n_left;
                if lo == hi || n_left < self.min_leaf || n_right < self.min_leaf {
                    continue;
                }
                let right_sq: f64 = (0..d)
                    .map(|c| {
                        let r = total[c] - self.left_sum[c];
                        r * r
                    })
                    .sum();
                let score = left_sq / n_left as f64 + right_sq / n_right as f64;
                if best.as_ref().map_or(true, |b| score > b.score) {
                    let mut threshold = lo + (hi - lo) / 2.0;
                    if !(threshold >= lo && threshold < hi) {
                        threshold = lo;
                    }
                    best = Some(SplitChoice {
                        feature: f,
                        threshold,
                        score,
                    });
                }
            }
        }
        best.filter(|b| b.score > parent * (1.0 + 1e-12) + 1e-15)
    }

    fn build(&mut self, idx: &mut [usize], depth: usize) -> usize {
        let sum = self.target_sum(idx);
        let n = idx.len();
        let stop = n < 2 * self.min_leaf || self.max_depth.is_some_and(|m| depth >= m) || self.is_pure(idx);
        if stop {
            return self.push_leaf(idx);
        }
        let Some(choice) = self.best_split(idx, &sum) else {
            return self.push_leaf(idx);
        };
        let node = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { offset: 0, samples: 0 });
        let x = self.x;
        let mid = partition(idx, |&i| x.get(i, choice.feature) <= choice.threshold);
        let (l, r) = idx.split_at_mut(mid);
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[node] = TreeNode::Split {
            feature: choice.feature,
            threshold: choice.threshold,
            left,
            right,
        };
        node
    }
}

/// Stable in-place partition; returns the number of elements satisfying `pred`.
fn partition(idx: &mut [usize], pred: impl Fn(&usize) -> bool) -> usize {
    let (yes, no): (Vec<usize>, Vec<usize>) = idx.iter().partition(|i| pred(i));
    let mid = yes.len();
    idx[..mid].copy_from_slice(&yes);
    idx[mid..].copy_from_slice(&no);
    mid
}

/// Fits tree number `index` of the forest described by `config`.
pub fn fit_member(x: &Matrix<f64>, y: &Matrix<f64>, config: &ForestConfig, index: usize) -> ForestMember {
    let n = x.rows();
    let mut r = rng::seeded(rng::derive_seed(config.seed, index as u64));
    let mut in_bag = alloc::vec![0u32; n];
    let mut idx: Vec<usize> = if config.bootstrap {
        (0..n)
            .map(|_| {
                let i = r.gen_range(0..n);
                in_bag[i] += 1;
                i
            })
            .collect()
    } else {
        in_bag.iter_mut().for_each(|c| *c = 1);
        (0..n).collect()
    };
    idx.sort_unstable();
    let mut builder = Builder {
        x,
        y,
        min_leaf: config.min_samples_leaf,
        max_depth: config.max_depth,
        mtry: config.mtry(x.cols()),
        features: (0..x.cols()).collect(),
        nodes: Vec::new(),
        leaf_rows: Vec::new(),
        sorted: Vec::with_capacity(n),
        left_sum: alloc::vec![0.0; y.cols()],
        rng: rng::seeded(rng::derive_seed(config.seed ^ 0x7472_6565, index as u64)),
    };
    builder.build(&mut idx, 0);
    ForestMember {
        tree: Tree {
            nodes: builder.nodes,
            leaf_rows: builder.leaf_rows,
        },
        in_bag,
    }
}

fn check_inputs(x: &Matrix<f64>, y: &Matrix<f64>, config: &ForestConfig) -> Result<()> {
    config.validate()?;
    if x.rows() != y.rows() {
        return Err(Error::ShapeMismatch {
            context: "forest target rows",
            expected: x.rows(),
            found: y.rows(),
        });
    }
    if x.rows() < config.min_samples_leaf.max(1) {
        return Err(Error::TooFewSamples {
            needed: config.min_samples_leaf,
            got: x.rows(),
        });
    }
    Ok(())
}

/// Combines fitted members (in index order) into a forest and computes the
/// out-of-bag error.
pub fn assemble_forest(x: &Matrix<f64>, y: &Matrix<f64>, config: &ForestConfig, members: Vec<ForestMember>) -> Result<ForestModel> {
    check_inputs(x, y, config)?;
    let d = y.cols();
    let oob_mse = if config.bootstrap {
        let mut sq = 0.0;
        let mut counted = 0usize;
        let mut acc = alloc::vec![0.0; d];
        let mut scratch = alloc::vec![0.0; d];
        for i in 0..x.rows() {
            acc.iter_mut().for_each(|a| *a = 0.0);
            let mut votes = 0usize;
            for m in members.iter().filter(|m| m.in_bag[i] == 0) {
                m.tree.add_prediction(x.row(i), y, &mut acc, &mut scratch);
                votes += 1;
            }
            if votes > 0 {
                counted += 1;
                sq += acc
                    .iter()
                    .zip(y.row(i))
                    .map(|(a, t)| {
                        let e = a / votes as f64 - t;
                        e * e
                    })
                    .sum::<f64>()
                    / d.max(1) as f64;
            }
        }
        (counted > 0).then(|| sq / counted as f64)
    } else {
        None
    };
    Ok(ForestModel {
        trees: members.into_iter().map(|m| m.tree).collect(),
        targets: y.clone(),
        config: config.clone(),
        n_features: x.cols(),
        n_outputs: d,
        oob_mse,
    })
}

/// Fits every tree sequentially.
pub fn fit_forest(x: &Matrix<f64>, y: &Matrix<f64>, config: &ForestConfig) -> Result<ForestModel> {
    check_inputs(x, y, config)?;
    let members = (0..config.trees).map(|t| fit_member(x, y, config, t)).collect();
    assemble_forest(x, y, config, members)
}
