//! Multi-threaded pipeline backend.
//!
//! Forest members, leave-one-out neighbour lists, ML-kNN queries, regressor
//! predictions, node2vec walks and the two halves of a concatenated LINE
//! embedding run on the rayon pool; every one of these uses per-item
//! derived seeds, so results equal the sequential backend bit for bit.
//!
//! With `hogwild` set, LINE and skip-gram SGD run on several threads
//! updating shared vectors without locks. That mode is not reproducible.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use lnemlc_core::label_graph::LabelGraph;
use lnemlc_core::line::{self, assemble_table, init_vectors, learning_rate, line_runs, LineConfig, LineOrder, LineSampler, EmbeddingTable};
use lnemlc_core::mlknn::{knn_search, MlknnModel, MlknnPrediction};
use lnemlc_core::node2vec::{self, finish_table, for_each_pair, noise_table, pairs_per_epoch, walk_plan, Node2vecConfig, WalkCorpus, Walker};
use lnemlc_core::pipeline::Backend;
use lnemlc_core::regress::{assemble_forest, fit_member, ForestConfig, ForestModel, Regressor};
use lnemlc_core::sgd::{ascent_step, DenseRows, RowStore, StepScratch};
use lnemlc_core::{rng, Error, LabelMatrix, Matrix, Result};
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct Parallel {
    pub hogwild: bool,
    start: Instant,
}

impl Parallel {
    pub fn new(hogwild: bool) -> Self {
        Parallel {
            hogwild,
            start: Instant::now(),
        }
    }
}

impl Default for Parallel {
    fn default() -> Self {
        Parallel::new(false)
    }
}

/// Sequential algorithms with a wall clock, for timing single-threaded runs.
#[derive(Debug, Clone)]
pub struct Timed {
    start: Instant,
}

impl Default for Timed {
    fn default() -> Self {
        Timed { start: Instant::now() }
    }
}

impl Backend for Timed {
    fn now_micros(&self) -> Option<u64> {
        Some(self.start.elapsed().as_micros() as u64)
    }
}

const ROW_CHUNK: usize = 64;

impl Backend for Parallel {
    fn now_micros(&self) -> Option<u64> {
        Some(self.start.elapsed().as_micros() as u64)
    }

    fn train_line(&self, graph: &LabelGraph, config: &LineConfig) -> Result<EmbeddingTable> {
        config.validate()?;
        if graph.edge_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let parts = line_runs(graph, config)
            .into_par_iter()
            .map(|(order, dim, budget, seed)| {
                if self.hogwild {
                    hogwild_line(graph, order, dim, config, budget, seed)
                } else {
                    let mut trainer = line::LineTrainer::new(graph, order, dim, config, budget, seed)?;
                    trainer.run(budget);
                    Ok(trainer.into_vertex_vectors())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        assemble_table(graph, config, &parts)
    }

    fn train_node2vec(&self, graph: &LabelGraph, config: &Node2vecConfig, max_cardinality: usize) -> Result<EmbeddingTable> {
        config.validate()?;
        if graph.edge_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let length = config.walk_length(max_cardinality);
        let walker = Walker::new(graph, config.return_p, config.inout_q);
        let walks = walk_plan(graph, config)
            .into_par_iter()
            .map(|(start, seed)| walker.walk(start, length, &mut rng::seeded(seed)))
            .collect();
        let corpus = WalkCorpus { walks };
        if self.hogwild {
            finish_table(graph, hogwild_skipgram(&corpus, graph.node_count(), config)?)
        } else {
            node2vec::train_skipgram(&corpus, graph, config)
        }
    }

    fn fit_forest(&self, x: &Matrix<f64>, y: &Matrix<f64>, config: &ForestConfig) -> Result<ForestModel> {
        config.validate()?;
        if x.rows() < config.min_samples_leaf || x.rows() == 0 {
            // let the reference path produce the error
            return lnemlc_core::regress::fit_forest(x, y, config);
        }
        let members = (0..config.trees).into_par_iter().map(|t| fit_member(x, y, config, t)).collect();
        assemble_forest(x, y, config, members)
    }

    fn fit_mlknn(&self, x: &Matrix<f64>, y: &LabelMatrix, k: usize, smoothing: f64) -> Result<MlknnModel> {
        MlknnModel::check_fit_inputs(x, y, k, smoothing)?;
        let neighbors = (0..x.rows())
            .into_par_iter()
            .map(|i| knn_search(x.row(i), x, k, Some(i)))
            .collect::<Result<Vec<_>>>()?;
        MlknnModel::fit_with_neighbors(x, y, k, smoothing, &neighbors)
    }

    fn predict_mlknn(&self, model: &MlknnModel, queries: &Matrix<f64>) -> Result<MlknnPrediction> {
        if queries.cols() != model.n_features() {
            return model.predict(queries);
        }
        let l = model.n_labels();
        let mut assignments = Matrix::<u8>::zeros(queries.rows(), l);
        let mut scores = Matrix::<f64>::zeros(queries.rows(), l);
        assignments
            .as_mut_slice()
            .par_chunks_mut(l.max(1))
            .zip(scores.as_mut_slice().par_chunks_mut(l.max(1)))
            .enumerate()
            .try_for_each(|(i, (a, s))| -> Result<()> {
                let nn = model.neighbors(queries.row(i))?;
                model.decide(&nn, a, s);
                Ok(())
            })?;
        Ok(MlknnPrediction { assignments, scores })
    }

    fn predict_regressor(&self, model: &Regressor, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        if x.rows() <= ROW_CHUNK {
            return model.predict(x);
        }
        let chunks: Vec<Vec<usize>> = (0..x.rows()).collect::<Vec<_>>().chunks(ROW_CHUNK).map(|c| c.to_vec()).collect();
        let parts = chunks
            .par_iter()
            .map(|rows| model.predict(&x.select_rows(rows)))
            .collect::<Result<Vec<_>>>()?;
        let cols = parts[0].cols();
        let data = parts.into_iter().flat_map(|p| p.into_vec()).collect();
        Matrix::from_vec(x.rows(), cols, data)
    }
}

/// Row store shared between threads; updates are unsynchronised
/// read-modify-writes of individual coordinates.
struct AtomicRows {
    dim: usize,
    data: Vec<AtomicU64>,
}

impl AtomicRows {
    fn from_dense(rows: DenseRows, dim: usize) -> Self {
        AtomicRows {
            dim,
            data: rows.into_vec().into_iter().map(|v| AtomicU64::new(v.to_bits())).collect(),
        }
    }

    fn into_dense(self) -> DenseRows {
        DenseRows::from_vec(self.dim, self.data.into_iter().map(|a| f64::from_bits(a.into_inner())).collect())
    }
}

struct SharedRows<'a>(&'a AtomicRows);

impl RowStore for SharedRows<'_> {
    fn dim(&self) -> usize {
        self.0.dim
    }

    fn load(&self, row: usize, out: &mut [f64]) {
        let cells = &self.0.data[row * self.0.dim..(row + 1) * self.0.dim];
        for (o, c) in out.iter_mut().zip(cells) {
            *o = f64::from_bits(c.load(Ordering::Relaxed));
        }
    }

    fn add_scaled(&mut self, row: usize, delta: &[f64], scale: f64) {
        let cells = &self.0.data[row * self.0.dim..(row + 1) * self.0.dim];
        for (c, d) in cells.iter().zip(delta) {
            let v = f64::from_bits(c.load(Ordering::Relaxed)) + scale * d;
            c.store(v.to_bits(), Ordering::Relaxed);
        }
    }
}

fn workers() -> usize {
    rayon::current_num_threads().max(1)
}

fn hogwild_line(graph: &LabelGraph, order: LineOrder, dim: usize, config: &LineConfig, budget: u64, seed: u64) -> Result<DenseRows> {
    let sampler = LineSampler::new(graph, config.negative_ratio)?;
    let nodes = graph.node_count();
    let vertex = AtomicRows::from_dense(init_vectors(nodes, dim, rng::derive_seed(seed, 1)), dim);
    let context = (order == LineOrder::Second).then(|| AtomicRows::from_dense(DenseRows::new(nodes, dim), dim));
    let step = AtomicU64::new(0);
    let w = workers() as u64;
    (0..w).into_par_iter().for_each(|worker| {
        let mut r = rng::seeded(rng::derive_seed(seed, 1000 + worker));
        let mut scratch = StepScratch::new(dim);
        let mut negatives = Vec::with_capacity(config.negative_ratio);
        let mut sources = SharedRows(&vertex);
        let mut targets = context.as_ref().map(SharedRows);
        let share = budget / w + u64::from(worker < budget % w);
        for _ in 0..share {
            let lr = learning_rate(config.initial_learning_rate, step.fetch_add(1, Ordering::Relaxed), budget);
            let (s, t) = sampler.sample(&mut r, &mut negatives);
            ascent_step(&mut sources, targets.as_mut(), s, t, &negatives, lr, &mut scratch);
        }
    });
    Ok(vertex.into_dense())
}

fn hogwild_skipgram(corpus: &WalkCorpus, nodes: usize, config: &Node2vecConfig) -> Result<DenseRows> {
    if corpus.walks.iter().all(|w| w.len() < 2) {
        return Err(Error::EmptyCorpus);
    }
    let dim = config.dimension;
    let noise = noise_table(corpus, nodes)?;
    let total = pairs_per_epoch(corpus, config.window_size) * config.epochs as u64;
    let center = AtomicRows::from_dense(init_vectors(nodes, dim, rng::derive_seed(config.seed, 21)), dim);
    let context = AtomicRows::from_dense(DenseRows::new(nodes, dim), dim);
    let step = AtomicU64::new(0);
    let chunk = corpus.walks.len().div_ceil(workers()).max(1);
    for epoch in 0..config.epochs as u64 {
        corpus.walks.par_chunks(chunk).enumerate().for_each(|(part, walks)| {
            let mut r = rng::seeded(rng::derive_seed(config.seed, (epoch << 32) | part as u64));
            let mut scratch = StepScratch::new(dim);
            let mut negatives = Vec::with_capacity(config.negative_ratio);
            let mut sources = SharedRows(&center);
            let mut targets = SharedRows(&context);
            for walk in walks {
                for_each_pair(walk, config.window_size, |c, ctx| {
                    let lr = learning_rate(config.learning_rate, step.fetch_add(1, Ordering::Relaxed), total);
                    negatives.clear();
                    negatives.extend((0..config.negative_ratio).map(|_| noise.sample(&mut r)));
                    ascent_step(&mut sources, Some(&mut targets), c, ctx, &negatives, lr, &mut scratch);
                });
            }
        });
    }
    Ok(center.into_dense())
}
