//! Negative-sampling objective shared by LINE and skip-gram training.
//!
//! For a source vector `u_s`, a positive target `u_t` and negatives
//! `u_n1..u_nk` the per-sample objective is
//! `log σ(u_t·u_s) + Σ log σ(-u_nk·u_s)`, maximised by gradient ascent.

use alloc::vec::Vec;

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

/// `log σ(x)`, stable for large |x|.
#[inline]
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -libm::log1p(libm::exp(-x))
    } else {
        x - libm::log1p(libm::exp(x))
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn objective(source: &[f64], target: &[f64], negatives: &[&[f64]]) -> f64 {
    log_sigmoid(dot(target, source)) + negatives.iter().map(|n| log_sigmoid(-dot(n, source))).sum::<f64>()
}

/// Gradient of [`objective`] with respect to each argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub source: Vec<f64>,
    pub target: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

pub fn line_gradient(source: &[f64], target: &[f64], negatives: &[&[f64]]) -> Gradients {
    let pos = 1.0 - sigmoid(dot(target, source));
    let mut g_source: Vec<f64> = target.iter().map(|t| pos * t).collect();
    let g_target = source.iter().map(|s| pos * s).collect();
    let g_negatives = negatives
        .iter()
        .map(|n| {
            let c = -sigmoid(dot(n, source));
            for (g, v) in g_source.iter_mut().zip(n.iter()) {
                *g += c * v;
            }
            source.iter().map(|s| c * s).collect()
        })
        .collect();
    Gradients {
        source: g_source,
        target: g_target,
        negatives: g_negatives,
    }
}

/// Row-addressable parameter storage. Single-threaded training uses
/// [`DenseRows`]; the companion crate provides a lock-free shared store.
pub trait RowStore {
    fn dim(&self) -> usize;
    fn load(&self, row: usize, out: &mut [f64]);
    /// `row += scale * delta`
    fn add_scaled(&mut self, row: usize, delta: &[f64], scale: f64);
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseRows {
    dim: usize,
    data: Vec<f64>,
}

impl DenseRows {
    pub fn new(rows: usize, dim: usize) -> Self {
        DenseRows {
            dim,
            data: alloc::vec![0.0; rows * dim],
        }
    }

    pub fn from_vec(dim: usize, data: Vec<f64>) -> Self {
        debug_assert!(dim > 0 && data.len() % dim == 0);
        DenseRows { dim, data }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl RowStore for DenseRows {
    fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn load(&self, row: usize, out: &mut [f64]) {
        out.copy_from_slice(self.row(row));
    }

    #[inline]
    fn add_scaled(&mut self, row: usize, delta: &[f64], scale: f64) {
        for (p, d) in self.row_mut(row).iter_mut().zip(delta) {
            *p += scale * d;
        }
    }
}

/// Scratch buffers for [`ascent_step`].
#[derive(Debug, Clone)]
pub struct StepScratch {
    source: Vec<f64>,
    target: Vec<f64>,
    error: Vec<f64>,
    coefs: Vec<f64>,
}

impl StepScratch {
    pub fn new(dim: usize) -> Self {
        StepScratch {
            source: alloc::vec![0.0; dim],
            target: alloc::vec![0.0; dim],
            error: alloc::vec![0.0; dim],
            coefs: Vec::new(),
        }
    }
}

/// One gradient-ascent step on the negative-sampling objective.
///
/// `source` lives in `sources`; the positive `target` and the `negatives`
/// live in `targets`. Passing the same store for both (first-order LINE)
/// is expressed by `targets = None`. All dot products use the parameters as
/// they were before the step, so the update equals `lr` times the exact
/// gradient of the sample objective with respect to the table.
pub fn ascent_step<S: RowStore>(
    sources: &mut S,
    mut targets: Option<&mut S>,
    source: usize,
    target: usize,
    negatives: &[usize],
    lr: f64,
    scratch: &mut StepScratch,
) {
    let StepScratch {
        source: u,
        target: v,
        error,
        coefs,
    } = scratch;
    sources.load(source, u);
    error.iter_mut().for_each(|e| *e = 0.0);
    coefs.clear();

    let nodes = core::iter::once((target, 1.0)).chain(negatives.iter().map(|&n| (n, 0.0)));
    for (node, label) in nodes.clone() {
        match targets.as_deref() {
            Some(t) => t.load(node, v),
            None => sources.load(node, v),
        }
        let g = label - sigmoid(dot(u, v));
        for (e, x) in error.iter_mut().zip(v.iter()) {
            *e += g * x;
        }
        coefs.push(g);
    }
    for ((node, _), &g) in nodes.zip(coefs.iter()) {
        match targets.as_deref_mut() {
            Some(t) => t.add_scaled(node, u, lr * g),
            None => sources.add_scaled(node, u, lr * g),
        }
    }
    sources.add_scaled(source, error, lr);
}
