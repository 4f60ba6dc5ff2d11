//! Label co-occurrence network.
//!
//! Nodes are labels. An edge `(s, t)` exists when at least one training row
//! carries both labels; `s == t` gives the self-edge of every label with a
//! positive sample. Weighted graphs use `co-occurrence count / n`.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::matrix::LabelMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// Undirected weighted graph in canonical form (`source <= target`, sorted,
/// no duplicates).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelGraph {
    node_count: usize,
    edges: Vec<Edge>,
    weighted: bool,
}

impl LabelGraph {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, s: usize, t: usize) -> Option<f64> {
        let (s, t) = if s <= t { (s, t) } else { (t, s) };
        self.edges
            .binary_search_by(|e| (e.source, e.target).cmp(&(s, t)))
            .ok()
            .map(|i| self.edges[i].weight)
    }

    /// Nodes without any incident edge.
    pub fn isolated_nodes(&self) -> Vec<usize> {
        let mut touched = alloc::vec![false; self.node_count];
        for e in &self.edges {
            touched[e.source] = true;
            touched[e.target] = true;
        }
        (0..self.node_count).filter(|&v| !touched[v]).collect()
    }

    /// Sum of incident edge weights; a self-edge counts once.
    pub fn degrees(&self) -> Vec<f64> {
        let mut deg = alloc::vec![0.0; self.node_count];
        for e in &self.edges {
            deg[e.source] += e.weight;
            if e.source != e.target {
                deg[e.target] += e.weight;
            }
        }
        deg
    }

    /// Neighbour lists `(node, weight)` sorted by node, self-edges included.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); self.node_count];
        for e in &self.edges {
            adj[e.source].push((e.target, e.weight));
            if e.source != e.target {
                adj[e.target].push((e.source, e.weight));
            }
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }
        adj
    }
}

/// Builds the label network from a binary label matrix.
pub fn build_graph(labels: &LabelMatrix, weighted: bool) -> LabelGraph {
    let l = labels.cols();
    let n = labels.rows();
    // upper triangle (including the diagonal) of the co-occurrence counts
    let mut counts = alloc::vec![0usize; l * l];
    let mut active = Vec::with_capacity(l);
    for row in labels.iter_rows() {
        active.clear();
        active.extend((0..l).filter(|&j| row[j] == 1));
        for (a, &s) in active.iter().enumerate() {
            for &t in &active[a..] {
                counts[s * l + t] += 1;
            }
        }
    }
    let mut edges = Vec::new();
    for s in 0..l {
        for t in s..l {
            let c = counts[s * l + t];
            if c > 0 {
                let weight = if weighted { c as f64 / n as f64 } else { 1.0 };
                edges.push(Edge {
                    source: s,
                    target: t,
                    weight,
                });
            }
        }
    }
    LabelGraph {
        node_count: l,
        edges,
        weighted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use alloc::vec;

    #[test]
    fn three_row_example() {
        let y = Matrix::from_rows(&[vec![1u8, 1, 0], vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        let g = build_graph(&y, true);
        let expected = [
            (0, 0, 2.0 / 3.0),
            (0, 1, 1.0 / 3.0),
            (1, 1, 2.0 / 3.0),
            (1, 2, 1.0 / 3.0),
            (2, 2, 1.0 / 3.0),
        ];
        assert_eq!(g.edge_count(), expected.len());
        for (e, &(s, t, w)) in g.edges().iter().zip(&expected) {
            assert_eq!((e.source, e.target), (s, t));
            assert_eq!(e.weight, w);
        }
        assert_eq!(g.weight(1, 0), Some(1.0 / 3.0));
        assert_eq!(g.weight(0, 2), None);
    }

    #[test]
    fn no_cooccurrence_means_self_edges_only() {
        let y = Matrix::from_rows(&[vec![1u8, 0], vec![0, 1]]).unwrap();
        for weighted in [false, true] {
            let g = build_graph(&y, weighted);
            let pairs: Vec<_> = g.edges().iter().map(|e| (e.source, e.target)).collect();
            assert_eq!(pairs, vec![(0, 0), (1, 1)]);
        }
    }

    #[test]
    fn zero_column_is_isolated() {
        let y = Matrix::from_rows(&[vec![1u8, 0, 1], vec![1, 0, 0]]).unwrap();
        let g = build_graph(&y, false);
        assert_eq!(g.isolated_nodes(), vec![1]);
        assert!(g.edges().iter().all(|e| e.source != 1 && e.target != 1));
        assert!(g.edges().iter().all(|e| e.weight == 1.0));
    }

    #[test]
    fn adjacency_and_degree() {
        let y = Matrix::from_rows(&[vec![1u8, 1], vec![1, 0]]).unwrap();
        let g = build_graph(&y, true);
        assert_eq!(g.adjacency()[0], vec![(0, 1.0), (1, 0.5)]);
        assert_eq!(g.degrees(), vec![1.5, 1.0]);
    }
}
