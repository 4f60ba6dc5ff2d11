//! LINE embeddings of the label network (first-order, second-order or both
//! concatenated), trained by edge-sampling SGD with negative sampling.

use alloc::format;
use alloc::vec::Vec;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alias::AliasTable;
use crate::error::{Error, Result};
use crate::label_graph::LabelGraph;
use crate::matrix::Matrix;
use crate::rng;
use crate::sgd::{self, ascent_step, DenseRows, StepScratch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineOrder {
    First,
    Second,
    /// Independently trained first- and second-order halves, glued per node.
    Concat,
}

impl LineOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            LineOrder::First => "1",
            LineOrder::Second => "2",
            LineOrder::Concat => "1+2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "1" | "first" => Some(LineOrder::First),
            "2" | "second" => Some(LineOrder::Second),
            "1+2" | "concat" | "both" => Some(LineOrder::Concat),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum EmbeddingKind {
    Line { order: LineOrder },
    Node2vec,
    /// Loaded from a file or constructed by hand.
    External,
}

/// One `d`-dimensional vector per label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingTable {
    pub vectors: Matrix<f64>,
    pub kind: EmbeddingKind,
}

impl EmbeddingTable {
    pub fn new(vectors: Matrix<f64>, kind: EmbeddingKind) -> Result<Self> {
        if !vectors.is_finite() {
            return Err(Error::InvalidConfig("embedding contains non-finite values".into()));
        }
        Ok(EmbeddingTable { vectors, kind })
    }

    pub fn dimension(&self) -> usize {
        self.vectors.cols()
    }

    pub fn label_count(&self) -> usize {
        self.vectors.rows()
    }

    pub fn vector(&self, label: usize) -> &[f64] {
        self.vectors.row(label)
    }
}

pub const DEFAULT_NEGATIVE_RATIO: usize = 5;
pub const DEFAULT_LEARNING_RATE: f64 = 0.025;
const MIN_DEFAULT_BUDGET: u64 = 100_000;
const BUDGET_PER_EDGE: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineConfig {
    pub dimension: usize,
    pub order: LineOrder,
    pub negative_ratio: usize,
    /// Total edge samples; `None` means `max(1000 × edges, 10^5)`.
    pub sample_budget: Option<u64>,
    pub initial_learning_rate: f64,
    pub seed: u64,
}

impl LineConfig {
    pub fn new(dimension: usize, order: LineOrder, seed: u64) -> Self {
        LineConfig {
            dimension,
            order,
            negative_ratio: DEFAULT_NEGATIVE_RATIO,
            sample_budget: None,
            initial_learning_rate: DEFAULT_LEARNING_RATE,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(Error::InvalidConfig(format!("dimension must be >= 2, got {}", self.dimension)));
        }
        if self.order == LineOrder::Concat && self.dimension % 2 != 0 {
            return Err(Error::InvalidConfig("order 1+2 needs an even dimension".into()));
        }
        if self.negative_ratio == 0 {
            return Err(Error::InvalidConfig("negative ratio must be >= 1".into()));
        }
        if !(self.initial_learning_rate > 0.0) {
            return Err(Error::InvalidConfig("learning rate must be positive".into()));
        }
        Ok(())
    }

    pub fn budget_for(&self, graph: &LabelGraph) -> u64 {
        self.sample_budget
            .unwrap_or_else(|| (BUDGET_PER_EDGE * graph.edge_count() as u64).max(MIN_DEFAULT_BUDGET))
    }
}

/// Checks that `d` is a power of two in `[4, 4096]`.
pub fn validate_grid_dimension(d: usize) -> Result<()> {
    if d.is_power_of_two() && (4..=4096).contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "dimension {d} is not a power of two between 4 and 4096"
        )))
    }
}

/// Linear decay from `lr0` at step 0 to `lr0 / 100` at the last step.
#[inline]
pub fn learning_rate(lr0: f64, step: u64, total: u64) -> f64 {
    let progress = if total == 0 { 0.0 } else { step as f64 / total as f64 };
    lr0 * (1.0 - 0.99 * progress.min(1.0))
}

/// Uniform `[-0.5/d, 0.5/d]` initialisation for `nodes × dim` parameters.
pub fn init_vectors(nodes: usize, dim: usize, seed: u64) -> DenseRows {
    let mut r = rng::seeded(seed);
    let half = 0.5 / dim as f64;
    let data = (0..nodes * dim).map(|_| r.gen_range(-half..half)).collect();
    DenseRows::from_vec(dim, data)
}

/// Edge and negative sampling for one LINE run.
#[derive(Debug, Clone)]
pub struct LineSampler {
    edges: Vec<(usize, usize)>,
    edge_table: AliasTable,
    noise_table: AliasTable,
    negative_ratio: usize,
}

impl LineSampler {
    pub fn new(graph: &LabelGraph, negative_ratio: usize) -> Result<Self> {
        if graph.edge_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let edges = graph.edges().iter().map(|e| (e.source, e.target)).collect();
        let weights: Vec<f64> = graph.edges().iter().map(|e| e.weight).collect();
        let noise: Vec<f64> = graph.degrees().iter().map(|d| libm::pow(*d, 0.75)).collect();
        Ok(LineSampler {
            edges,
            edge_table: AliasTable::new(&weights)?,
            noise_table: AliasTable::new(&noise)?,
            negative_ratio,
        })
    }

    /// Draws a directed edge `(source, target)` and fills `negatives`.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, negatives: &mut Vec<usize>) -> (usize, usize) {
        let (a, b) = self.edges[self.edge_table.sample(rng)];
        let (s, t) = if rng.gen::<bool>() { (a, b) } else { (b, a) };
        negatives.clear();
        negatives.extend((0..self.negative_ratio).map(|_| self.noise_table.sample(rng)));
        (s, t)
    }
}

/// Single-order LINE trainer that can be advanced in chunks.
#[derive(Debug, Clone)]
pub struct LineTrainer {
    order: LineOrder,
    sampler: LineSampler,
    vertex: DenseRows,
    context: Option<DenseRows>,
    rng: rng::Rng,
    lr0: f64,
    step: u64,
    total: u64,
    scratch: StepScratch,
    negatives: Vec<usize>,
}

impl LineTrainer {
    /// `order` must be `First` or `Second`.
    pub fn new(graph: &LabelGraph, order: LineOrder, dim: usize, config: &LineConfig, total: u64, seed: u64) -> Result<Self> {
        if order == LineOrder::Concat {
            return Err(Error::InvalidConfig("a single trainer handles one order".into()));
        }
        let sampler = LineSampler::new(graph, config.negative_ratio)?;
        let nodes = graph.node_count();
        let vertex = init_vectors(nodes, dim, rng::derive_seed(seed, 1));
        let context = (order == LineOrder::Second).then(|| DenseRows::new(nodes, dim));
        Ok(LineTrainer {
            order,
            sampler,
            vertex,
            context,
            rng: rng::seeded(rng::derive_seed(seed, 2)),
            lr0: config.initial_learning_rate,
            step: 0,
            total,
            scratch: StepScratch::new(dim),
            negatives: Vec::with_capacity(config.negative_ratio),
        })
    }

    pub fn order(&self) -> LineOrder {
        self.order
    }

    pub fn steps_done(&self) -> u64 {
        self.step
    }

    pub fn total_steps(&self) -> u64 {
        self.total
    }

    pub fn is_done(&self) -> bool {
        self.step >= self.total
    }

    /// Runs up to `n` further steps (bounded by the budget).
    pub fn run(&mut self, n: u64) {
        let end = (self.step + n).min(self.total);
        while self.step < end {
            let lr = learning_rate(self.lr0, self.step, self.total);
            let (s, t) = self.sampler.sample(&mut self.rng, &mut self.negatives);
            ascent_step(
                &mut self.vertex,
                self.context.as_mut(),
                s,
                t,
                &self.negatives,
                lr,
                &mut self.scratch,
            );
            self.step += 1;
        }
    }

    /// Mean sample objective over fixed `(source, target, negatives)` triples.
    pub fn objective(&self, samples: &[(usize, usize, Vec<usize>)]) -> f64 {
        let targets = self.context.as_ref().unwrap_or(&self.vertex);
        let total: f64 = samples
            .iter()
            .map(|(s, t, negs)| {
                let neg_rows: Vec<&[f64]> = negs.iter().map(|&n| targets.row(n)).collect();
                sgd::objective(self.vertex.row(*s), targets.row(*t), &neg_rows)
            })
            .sum();
        total / samples.len().max(1) as f64
    }

    /// Draws evaluation samples from the training distribution.
    pub fn draw_samples(&self, count: usize, seed: u64) -> Vec<(usize, usize, Vec<usize>)> {
        let mut r = rng::seeded(seed);
        (0..count)
            .map(|_| {
                let mut negs = Vec::new();
                let (s, t) = self.sampler.sample(&mut r, &mut negs);
                (s, t, negs)
            })
            .collect()
    }

    pub fn vertex_vectors(&self) -> &DenseRows {
        &self.vertex
    }

    pub fn into_vertex_vectors(self) -> DenseRows {
        self.vertex
    }
}

/// Seeds and budgets for the one or two single-order runs of `config`.
pub fn line_runs(graph: &LabelGraph, config: &LineConfig) -> Vec<(LineOrder, usize, u64, u64)> {
    let budget = config.budget_for(graph);
    match config.order {
        LineOrder::Concat => {
            let half = config.dimension / 2;
            alloc::vec![
                (LineOrder::First, half, budget / 2, rng::derive_seed(config.seed, 11)),
                (LineOrder::Second, half, budget - budget / 2, rng::derive_seed(config.seed, 12)),
            ]
        }
        order => alloc::vec![(order, config.dimension, budget, rng::derive_seed(config.seed, 10))],
    }
}

/// Joins per-order vertex tables and zeroes isolated nodes.
pub fn assemble_table(graph: &LabelGraph, config: &LineConfig, parts: &[DenseRows]) -> Result<EmbeddingTable> {
    let nodes = graph.node_count();
    let mut out = Matrix::zeros(nodes, config.dimension);
    let isolated = graph.isolated_nodes();
    for v in 0..nodes {
        if isolated.binary_search(&v).is_ok() {
            continue;
        }
        let row = out.row_mut(v);
        let mut offset = 0;
        for part in parts {
            let src = part.row(v);
            row[offset..offset + src.len()].copy_from_slice(src);
            offset += src.len();
        }
    }
    EmbeddingTable::new(out, EmbeddingKind::Line { order: config.order })
}

/// Trains a LINE embedding in deterministic single-threaded mode.
pub fn train_line(graph: &LabelGraph, config: &LineConfig) -> Result<EmbeddingTable> {
    config.validate()?;
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut parts = Vec::new();
    for (order, dim, budget, seed) in line_runs(graph, config) {
        let mut trainer = LineTrainer::new(graph, order, dim, config, budget, seed)?;
        trainer.run(budget);
        parts.push(trainer.into_vertex_vectors());
    }
    assemble_table(graph, config, &parts)
}
