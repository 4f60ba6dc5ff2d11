//! node2vec: second-order biased random walks over the label network, fed to
//! a skip-gram model trained with negative sampling.

use alloc::format;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alias::AliasTable;
use crate::error::{Error, Result};
use crate::label_graph::LabelGraph;
use crate::line::{init_vectors, learning_rate, EmbeddingKind, EmbeddingTable, DEFAULT_LEARNING_RATE, DEFAULT_NEGATIVE_RATIO};
use crate::matrix::Matrix;
use crate::rng;
use crate::sgd::{ascent_step, DenseRows, RowStore, StepScratch};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node2vecConfig {
    pub dimension: usize,
    pub walks_per_node: usize,
    /// `None` resolves to twice the largest label cardinality (at least 2).
    pub max_walk_length: Option<usize>,
    pub return_p: f64,
    pub inout_q: f64,
    pub window_size: usize,
    pub negative_ratio: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Node2vecConfig {
    pub fn new(dimension: usize, seed: u64) -> Self {
        Node2vecConfig {
            dimension,
            walks_per_node: 200,
            max_walk_length: None,
            return_p: 1.0,
            inout_q: 1.0,
            window_size: 10,
            negative_ratio: DEFAULT_NEGATIVE_RATIO,
            epochs: 5,
            learning_rate: DEFAULT_LEARNING_RATE,
            seed,
        }
    }

    pub fn walk_length(&self, max_cardinality: usize) -> usize {
        self.max_walk_length.unwrap_or(2 * max_cardinality).max(2)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(Error::InvalidConfig(format!("dimension must be >= 2, got {}", self.dimension)));
        }
        if self.walks_per_node == 0 {
            return Err(Error::InvalidConfig("walks_per_node must be >= 1".into()));
        }
        if matches!(self.max_walk_length, Some(len) if len < 2) {
            return Err(Error::InvalidConfig("max_walk_length must be >= 2".into()));
        }
        if !(self.return_p > 0.0 && self.inout_q > 0.0) {
            return Err(Error::InvalidConfig("p and q must be positive".into()));
        }
        if self.window_size == 0 || self.negative_ratio == 0 || self.epochs == 0 {
            return Err(Error::InvalidConfig("window, negative ratio and epochs must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig("learning rate must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkCorpus {
    pub walks: Vec<Vec<usize>>,
}

impl WalkCorpus {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
}

/// Transition structure for biased walks.
#[derive(Debug, Clone)]
pub struct Walker {
    adjacency: Vec<Vec<(usize, f64)>>,
    first_step: Vec<Option<AliasTable>>,
    inv_p: f64,
    inv_q: f64,
}

impl Walker {
    pub fn new(graph: &LabelGraph, return_p: f64, inout_q: f64) -> Self {
        let adjacency = graph.adjacency();
        let first_step = adjacency
            .iter()
            .map(|nbrs| {
                let w: Vec<f64> = nbrs.iter().map(|&(_, w)| w).collect();
                AliasTable::new(&w).ok()
            })
            .collect();
        Walker {
            adjacency,
            first_step,
            inv_p: 1.0 / return_p,
            inv_q: 1.0 / inout_q,
        }
    }

    fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search_by_key(&b, |&(v, _)| v).is_ok()
    }

    /// Unnormalised weights for moving from `cur` (having come from `prev`)
    /// to each neighbour of `cur`, in adjacency order.
    pub fn transition_weights(&self, prev: usize, cur: usize) -> Vec<(usize, f64)> {
        self.adjacency[cur]
            .iter()
            .map(|&(x, w)| {
                let bias = if x == prev {
                    self.inv_p
                } else if self.is_adjacent(prev, x) {
                    1.0
                } else {
                    self.inv_q
                };
                (x, w * bias)
            })
            .collect()
    }

    /// One biased transition; `None` at a dead end.
    pub fn step<R: Rng + ?Sized>(&self, prev: usize, cur: usize, rng: &mut R) -> Option<usize> {
        let nbrs = &self.adjacency[cur];
        if nbrs.is_empty() {
            return None;
        }
        let weights = self.transition_weights(prev, cur);
        let total: f64 = weights.iter().map(|&(_, w)| w).sum();
        let mut u = rng.gen::<f64>() * total;
        for &(x, w) in &weights {
            if u < w {
                return Some(x);
            }
            u -= w;
        }
        weights.last().map(|&(x, _)| x)
    }

    /// One walk of at most `length` nodes, cut short only at dead ends.
    pub fn walk<R: Rng + ?Sized>(&self, start: usize, length: usize, rng: &mut R) -> Vec<usize> {
        let mut walk = Vec::with_capacity(length);
        walk.push(start);
        if length < 2 {
            return walk;
        }
        let Some(table) = &self.first_step[start] else { return walk };
        walk.push(self.adjacency[start][table.sample(rng)].0);
        while walk.len() < length {
            let cur = walk[walk.len() - 1];
            let prev = walk[walk.len() - 2];
            match self.step(prev, cur, rng) {
                Some(next) => walk.push(next),
                None => break,
            }
        }
        walk
    }
}

/// Start nodes of every walk, in generation order, with per-walk seeds.
/// Starts are reshuffled for each of the `walks_per_node` rounds.
pub fn walk_plan(graph: &LabelGraph, config: &Node2vecConfig) -> Vec<(usize, u64)> {
    let isolated = graph.isolated_nodes();
    let starts: Vec<usize> = (0..graph.node_count()).filter(|v| isolated.binary_search(v).is_err()).collect();
    let mut plan = Vec::with_capacity(starts.len() * config.walks_per_node);
    for round in 0..config.walks_per_node as u64 {
        let mut order = starts.clone();
        order.shuffle(&mut rng::seeded(rng::derive_seed(config.seed, round)));
        let round_seed = rng::derive_seed(config.seed ^ 0x6E32_7665_6300_0000, round);
        plan.extend(order.into_iter().map(|v| (v, rng::derive_seed(round_seed, v as u64))));
    }
    plan
}

pub fn generate_walks(graph: &LabelGraph, config: &Node2vecConfig, walk_length: usize) -> WalkCorpus {
    let walker = Walker::new(graph, config.return_p, config.inout_q);
    let walks = walk_plan(graph, config)
        .into_iter()
        .map(|(start, seed)| walker.walk(start, walk_length, &mut rng::seeded(seed)))
        .collect();
    WalkCorpus { walks }
}

/// Noise distribution `count^0.75` over corpus occurrences.
pub fn noise_table(corpus: &WalkCorpus, nodes: usize) -> Result<AliasTable> {
    let mut counts = alloc::vec![0.0f64; nodes];
    for walk in &corpus.walks {
        for &v in walk {
            counts[v] += 1.0;
        }
    }
    let w: Vec<f64> = counts.iter().map(|&c| libm::pow(c, 0.75)).collect();
    AliasTable::new(&w).map_err(|_| Error::EmptyCorpus)
}

/// Number of (center, context) pairs one epoch produces.
pub fn pairs_per_epoch(corpus: &WalkCorpus, window: usize) -> u64 {
    corpus
        .walks
        .iter()
        .map(|w| {
            (0..w.len())
                .map(|i| (i.saturating_sub(window)..(i + window + 1).min(w.len())).len() as u64 - 1)
                .sum::<u64>()
        })
        .sum()
}

/// Visits every (center, context) pair of `walk` within `window`.
#[inline]
pub fn for_each_pair(walk: &[usize], window: usize, mut f: impl FnMut(usize, usize)) {
    for i in 0..walk.len() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(walk.len());
        for j in lo..hi {
            if j != i {
                f(walk[i], walk[j]);
            }
        }
    }
}

/// Skip-gram with negative sampling; emits center vectors.
pub fn train_skipgram(corpus: &WalkCorpus, graph: &LabelGraph, config: &Node2vecConfig) -> Result<EmbeddingTable> {
    let (center, _) = train_skipgram_vectors(corpus, graph.node_count(), config)?;
    finish_table(graph, center)
}

/// Raw (center, context) parameters after training.
pub fn train_skipgram_vectors(corpus: &WalkCorpus, nodes: usize, config: &Node2vecConfig) -> Result<(DenseRows, DenseRows)> {
    config.validate()?;
    if corpus.walks.iter().all(|w| w.len() < 2) {
        return Err(Error::EmptyCorpus);
    }
    let dim = config.dimension;
    let noise = noise_table(corpus, nodes)?;
    let total = pairs_per_epoch(corpus, config.window_size) * config.epochs as u64;

    let mut center = init_vectors(nodes, dim, rng::derive_seed(config.seed, 21));
    let mut context = DenseRows::new(nodes, dim);
    let mut r = rng::seeded(rng::derive_seed(config.seed, 22));
    let mut scratch = StepScratch::new(dim);
    let mut negatives = Vec::with_capacity(config.negative_ratio);
    let mut step = 0u64;

    for _ in 0..config.epochs {
        for walk in &corpus.walks {
            for_each_pair(walk, config.window_size, |c, ctx| {
                let lr = learning_rate(config.learning_rate, step, total);
                negatives.clear();
                negatives.extend((0..config.negative_ratio).map(|_| noise.sample(&mut r)));
                ascent_step(&mut center, Some(&mut context), c, ctx, &negatives, lr, &mut scratch);
                step += 1;
            });
        }
    }
    Ok((center, context))
}

/// Copies center vectors into a table, zeroing isolated nodes.
pub fn finish_table(graph: &LabelGraph, center: DenseRows) -> Result<EmbeddingTable> {
    let nodes = graph.node_count();
    let dim = center.dim();
    let mut vectors = Matrix::from_vec(nodes, dim, center.into_vec())?;
    for v in graph.isolated_nodes() {
        vectors.row_mut(v).iter_mut().for_each(|x| *x = 0.0);
    }
    EmbeddingTable::new(vectors, EmbeddingKind::Node2vec)
}

/// Walks plus skip-gram, single-threaded and deterministic.
pub fn train_node2vec(graph: &LabelGraph, config: &Node2vecConfig, max_cardinality: usize) -> Result<EmbeddingTable> {
    config.validate()?;
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let corpus = generate_walks(graph, config, config.walk_length(max_cardinality));
    train_skipgram(&corpus, graph, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label_graph::build_graph;
    use alloc::vec;

    #[test]
    fn self_loop_walk() {
        let y = Matrix::from_rows(&[vec![1u8, 0], vec![1, 0]]).unwrap();
        let g = build_graph(&y, false);
        let w = Walker::new(&g, 1.0, 1.0);
        assert_eq!(w.walk(0, 4, &mut rng::seeded(0)), vec![0, 0, 0, 0]);
        // isolated start: the walk is just the start node
        assert_eq!(w.walk(1, 4, &mut rng::seeded(0)), vec![1]);
    }

    #[test]
    fn corpus_shape() {
        let y = Matrix::from_rows(&[vec![1u8, 1, 0, 0], vec![0, 1, 1, 0]]).unwrap();
        let g = build_graph(&y, false);
        let mut c = Node2vecConfig::new(4, 1);
        c.walks_per_node = 3;
        let corpus = generate_walks(&g, &c, 5);
        assert_eq!(corpus.len(), 9); // node 3 is isolated
        let adj = g.adjacency();
        for walk in &corpus.walks {
            assert!(!walk.is_empty() && walk.len() <= 5);
            for pair in walk.windows(2) {
                assert!(adj[pair[0]].iter().any(|&(v, _)| v == pair[1]));
            }
        }
    }

    #[test]
    fn walk_length_rule() {
        let c = Node2vecConfig::new(4, 0);
        assert_eq!(c.walk_length(3), 6);
        assert_eq!(c.walk_length(1), 2);
        let mut c2 = c.clone();
        c2.max_walk_length = Some(1);
        assert!(c2.validate().is_err());
    }

    #[test]
    fn pair_counting() {
        let corpus = WalkCorpus {
            walks: vec![vec![0, 1, 2], vec![3]],
        };
        assert_eq!(pairs_per_epoch(&corpus, 1), 4);
        assert_eq!(pairs_per_epoch(&corpus, 10), 6);
        let mut seen = Vec::new();
        for_each_pair(&corpus.walks[0], 1, |a, b| seen.push((a, b)));
        assert_eq!(seen, vec![(0, 1), (1, 0), (1, 2), (2, 1)]);
    }

    #[test]
    fn deterministic_tables() {
        let y = Matrix::from_rows(&[vec![1u8, 1, 0], vec![0, 1, 1]]).unwrap();
        let g = build_graph(&y, true);
        let mut c = Node2vecConfig::new(8, 4);
        c.walks_per_node = 20;
        let a = train_node2vec(&g, &c, 2).unwrap();
        let b = train_node2vec(&g, &c, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.kind, EmbeddingKind::Node2vec);
    }
}
