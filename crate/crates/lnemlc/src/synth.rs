//! Synthetic multi-label data with correlated labels.
//!
//! Each sample mixes one to three latent topics. A topic owns a centroid in
//! feature space and a small set of labels; a sample's features are the mean
//! of its topics' centroids plus Gaussian noise, and its labels are drawn
//! from its topics' label sets.

use lnemlc_core::dataset::MultiLabelDataset;
use lnemlc_core::{rng, Matrix, Result};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOptions {
    pub samples: usize,
    pub features: usize,
    pub labels: usize,
    /// `None` means `max(3, labels / 4)`.
    pub topics: Option<usize>,
    pub feature_noise: f64,
    /// Probability that a topic label is dropped from a sample.
    pub label_dropout: f64,
}

impl SynthOptions {
    pub fn new(samples: usize, features: usize, labels: usize) -> Self {
        SynthOptions {
            samples,
            features,
            labels,
            topics: None,
            feature_noise: 0.5,
            label_dropout: 0.15,
        }
    }
}

fn gaussian(r: &mut impl Rng) -> f64 {
    // Box-Muller
    let u1: f64 = 1.0 - r.gen::<f64>();
    let u2: f64 = r.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn generate(options: &SynthOptions, seed: u64) -> Result<MultiLabelDataset> {
    let (n, m, l) = (options.samples, options.features, options.labels);
    let topics = options.topics.unwrap_or((l / 4).max(3));
    let mut r = rng::seeded(seed);

    let centroids: Vec<Vec<f64>> = (0..topics).map(|_| (0..m).map(|_| 2.0 * gaussian(&mut r)).collect()).collect();
    // every label belongs to one topic; topics may share a few extra labels
    let mut topic_labels: Vec<Vec<usize>> = vec![Vec::new(); topics];
    for j in 0..l {
        topic_labels[j % topics].push(j);
    }
    for labels in topic_labels.iter_mut() {
        if r.gen_bool(0.5) {
            let extra = r.gen_range(0..l);
            if !labels.contains(&extra) {
                labels.push(extra);
            }
        }
    }

    let all: Vec<usize> = (0..topics).collect();
    let mut x = Vec::with_capacity(n * m);
    let mut y = vec![0u8; n * l];
    for i in 0..n {
        let count = r.gen_range(1..=3.min(topics));
        let chosen: Vec<usize> = all.choose_multiple(&mut r, count).copied().collect();
        for f in 0..m {
            let mean = chosen.iter().map(|&t| centroids[t][f]).sum::<f64>() / count as f64;
            x.push(mean + options.feature_noise * gaussian(&mut r));
        }
        for &t in &chosen {
            for &j in &topic_labels[t] {
                if !r.gen_bool(options.label_dropout) {
                    y[i * l + j] = 1;
                }
            }
        }
    }
    MultiLabelDataset::from_matrices(Matrix::from_vec(n, m, x)?, Matrix::from_vec(n, l, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_determinism() {
        let o = SynthOptions::new(100, 7, 9);
        let a = generate(&o, 3).unwrap();
        assert_eq!((a.n_samples(), a.n_features(), a.n_labels()), (100, 7, 9));
        assert_eq!(a, generate(&o, 3).unwrap());
        assert_ne!(a, generate(&o, 4).unwrap());
        assert!(a.labels().column_counts().iter().all(|&c| c > 0));
    }
}
