//! Plain-text interchange formats.
//!
//! * folds: CSV `row_index,fold` with a header line
//! * label graph: one `s t w` edge per line
//! * embedding table: header `l d`, then `name v1 … vd` per label
//! * walk corpus: whitespace-separated node names, one walk per line
//! * sample embedding: CSV with header `e0,…,e{d-1}`

use std::fmt::Write as _;

use lnemlc_core::dataset::FoldAssignment;
use lnemlc_core::label_graph::LabelGraph;
use lnemlc_core::line::{EmbeddingKind, EmbeddingTable};
use lnemlc_core::node2vec::WalkCorpus;
use lnemlc_core::Matrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] lnemlc_core::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn write_folds(folds: &FoldAssignment) -> String {
    let mut out = String::from("row_index,fold\n");
    for (i, f) in folds.fold_of().iter().enumerate() {
        let _ = writeln!(out, "{i},{f}");
    }
    out
}

/// Reads `row_index,fold` rows (any order, each row exactly once).
pub fn read_folds(text: &str) -> Result<FoldAssignment, FormatError> {
    let mut pairs = Vec::new();
    for (no, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || (no == 1 && line.starts_with("row_index")) {
            continue;
        }
        let (a, b) = line.split_once(',').ok_or_else(|| syntax(no, "expected row_index,fold"))?;
        let row: usize = a.trim().parse().map_err(|_| syntax(no, format!("bad row index '{a}'")))?;
        let fold: usize = b.trim().parse().map_err(|_| syntax(no, format!("bad fold '{b}'")))?;
        pairs.push((row, fold, no));
    }
    let n = pairs.len();
    let mut fold_of = vec![usize::MAX; n];
    for (row, fold, no) in pairs {
        if row >= n || fold_of[row] != usize::MAX {
            return Err(syntax(no, format!("row {row} is out of range or repeated")));
        }
        fold_of[row] = fold;
    }
    let k = fold_of.iter().max().map_or(0, |m| m + 1);
    Ok(FoldAssignment::new(fold_of, k)?)
}

pub fn write_edge_list(graph: &LabelGraph) -> String {
    let mut out = String::new();
    for e in graph.edges() {
        let _ = writeln!(out, "{} {} {}", e.source, e.target, e.weight);
    }
    out
}

/// Names are single tokens in the text formats.
fn token_name(name: &str) -> String {
    if name.is_empty() {
        return "_".into();
    }
    name.chars().map(|c| if c.is_whitespace() { '_' } else { c }).collect()
}

pub fn write_embedding(table: &EmbeddingTable, names: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", table.label_count(), table.dimension());
    for (j, name) in names.iter().enumerate().take(table.label_count()) {
        out.push_str(&token_name(name));
        for v in table.vector(j) {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// Parses the embedding text format; returns label names and the table.
pub fn read_embedding(text: &str) -> Result<(Vec<String>, EmbeddingTable), FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| syntax(1, "empty embedding file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()
        .map_err(|_| syntax(1, "header must be 'l d'"))?;
    let [l, d] = dims[..] else { return Err(syntax(1, "header must be 'l d'")) };
    let mut names = Vec::with_capacity(l);
    let mut values = Vec::with_capacity(l * d);
    for (no, line) in lines {
        let mut parts = line.split_whitespace();
        let name = parts.next().unwrap_or_default().to_string();
        let row: Vec<f64> = parts
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| syntax(no, "non-numeric vector entry"))?;
        if row.len() != d {
            return Err(syntax(no, format!("expected {d} values, found {}", row.len())));
        }
        names.push(name);
        values.extend(row);
    }
    if names.len() != l {
        return Err(syntax(1, format!("header declares {l} labels, found {}", names.len())));
    }
    let table = EmbeddingTable::new(Matrix::from_vec(l, d, values)?, EmbeddingKind::External)?;
    Ok((names, table))
}

pub fn write_walks(corpus: &WalkCorpus, names: &[String]) -> String {
    let mut out = String::new();
    for walk in &corpus.walks {
        let line: Vec<String> = walk.iter().map(|&v| token_name(&names[v])).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(m: &Matrix<f64>, prefix: &str) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..m.cols()).map(|j| format!("{prefix}{j}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in m.iter_rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use lnemlc_core::label_graph::build_graph;

    #[test]
    fn folds_round_trip() {
        let folds = FoldAssignment::new(vec![0, 1, 2, 1, 0], 3).unwrap();
        let text = write_folds(&folds);
        assert!(text.starts_with("row_index,fold\n0,0\n1,1\n"));
        assert_eq!(read_folds(&text).unwrap(), folds);
        assert!(read_folds("0,0\n0,1\n").is_err());
    }

    #[test]
    fn edge_list_lines() {
        let y = Matrix::from_rows(&[[1u8, 1, 0], [1, 0, 0], [0, 1, 1]]).unwrap();
        let text = write_edge_list(&build_graph(&y, false));
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().all(|l| l.ends_with(" 1")));
    }

    #[test]
    fn embedding_round_trip() {
        let m = Matrix::from_rows(&[[0.1, -2.5e-17], [3.0, 0.333_333_333_333_333_3]]).unwrap();
        let table = EmbeddingTable::new(m.clone(), EmbeddingKind::External).unwrap();
        let names = vec!["a".to_string(), "b".to_string()];
        let text = write_embedding(&table, &names);
        assert!(text.starts_with("2 2\na 0.1 "));
        let (back_names, back) = read_embedding(&text).unwrap();
        assert_eq!(back_names, names);
        assert_eq!(back.vectors, m);
        assert!(read_embedding("2 2\na 1 2\n").is_err());
    }
}
