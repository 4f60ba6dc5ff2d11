use lnemlc_core::mlknn::MlknnModel;
use lnemlc_core::{rng, LabelMatrix, Matrix};
use rand::Rng;

fn sorted_neighbors(query: &[f64], store: &Matrix<f64>, k: usize, skip: Option<usize>) -> Vec<usize> {
    let mut all: Vec<(f64, usize)> = (0..store.rows())
        .filter(|&i| Some(i) != skip)
        .map(|i| (store.row(i).iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum(), i))
        .collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.into_iter().take(k).map(|(_, i)| i).collect()
}

/// ML-kNN MAP rule computed directly from its definition.
fn map_oracle(x: &Matrix<f64>, y: &LabelMatrix, k: usize, s: f64, query: &[f64]) -> (Vec<u8>, Vec<f64>) {
    let (n, l) = (y.rows(), y.cols());
    let loo: Vec<Vec<usize>> = (0..n).map(|i| sorted_neighbors(x.row(i), x, k, Some(i))).collect();
    let near = sorted_neighbors(query, x, k, None);
    let mut out = (vec![0u8; l], vec![0.0; l]);
    for j in 0..l {
        let positives = (0..n).filter(|&i| y.get(i, j) == 1).count() as f64;
        let prior = (s + positives) / (2.0 * s + n as f64);
        let c = near.iter().filter(|&&i| y.get(i, j) == 1).count();
        let mut hits_pos = 0.0;
        let mut hits_neg = 0.0;
        let mut total_pos = 0.0;
        let mut total_neg = 0.0;
        for i in 0..n {
            let ci = loo[i].iter().filter(|&&nb| y.get(nb, j) == 1).count();
            if y.get(i, j) == 1 {
                total_pos += 1.0;
                hits_pos += f64::from(ci == c);
            } else {
                total_neg += 1.0;
                hits_neg += f64::from(ci == c);
            }
        }
        let lik_pos = (s + hits_pos) / (s * (k + 1) as f64 + total_pos);
        let lik_neg = (s + hits_neg) / (s * (k + 1) as f64 + total_neg);
        let a = prior * lik_pos;
        let b = (1.0 - prior) * lik_neg;
        out.0[j] = u8::from(a >= b);
        out.1[j] = a / (a + b);
    }
    out
}

fn clusters(r: &mut impl Rng) -> (Matrix<f64>, LabelMatrix) {
    let centers = [[0.0, 0.0], [5.0, 0.0], [0.0, 5.0]];
    let sets = [[1u8, 0, 0], [0, 1, 1], [1, 0, 1]];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (c, set) in centers.iter().zip(sets) {
        for i in 0..10 {
            xs.push(vec![c[0] + r.gen_range(-0.5..0.5), c[1] + r.gen_range(-0.5..0.5)]);
            let mut row = set;
            // a little label noise so the tables are not degenerate
            if i == 0 {
                row[2] ^= 1;
            }
            ys.push(row.to_vec());
        }
    }
    (Matrix::from_rows(&xs).unwrap(), Matrix::from_rows(&ys).unwrap())
}

#[test]
fn predictions_match_map_oracle_on_clusters() {
    let mut r = rng::seeded(30);
    let (x, y) = clusters(&mut r);
    let model = MlknnModel::fit(&x, &y, 5, 1.0).unwrap();
    let queries: Vec<Vec<f64>> = (0..40).map(|_| vec![r.gen_range(-1.0..6.0), r.gen_range(-1.0..6.0)]).collect();
    let q = Matrix::from_rows(&queries).unwrap();
    let pred = model.predict(&q).unwrap();
    for (i, query) in queries.iter().enumerate() {
        let (assign, scores) = map_oracle(&x, &y, 5, 1.0, query);
        assert_eq!(pred.assignments.row(i), &assign[..], "query {i}");
        for (a, b) in pred.scores.row(i).iter().zip(&scores) {
            assert!((a - b).abs() < 1e-12);
        }
    }
    // cluster centres recover their label sets
    let centres = Matrix::from_rows(&[[0.0, 0.0], [5.0, 0.0], [0.0, 5.0]]).unwrap();
    let p = model.predict(&centres).unwrap();
    assert_eq!(p.assignments.row(0), &[1, 0, 0]);
    assert_eq!(p.assignments.row(1), &[0, 1, 1]);
    assert_eq!(p.assignments.row(2), &[1, 0, 1]);
}

#[test]
fn scores_are_probabilities_consistent_with_assignments() {
    let mut r = rng::seeded(31);
    for trial in 0..10 {
        let n = 40;
        let x = Matrix::from_vec(n, 4, (0..n * 4).map(|_| r.gen::<f64>()).collect()).unwrap();
        let y = Matrix::from_vec(n, 5, (0..n * 5).map(|_| u8::from(r.gen_bool(0.3))).collect()).unwrap();
        let k = 1 + trial % 7;
        let model = MlknnModel::fit(&x, &y, k, 1.0).unwrap();
        let q = Matrix::from_vec(20, 4, (0..80).map(|_| r.gen::<f64>()).collect()).unwrap();
        let p = model.predict(&q).unwrap();
        for (a, s) in p.assignments.as_slice().iter().zip(p.scores.as_slice()) {
            assert!((0.0..=1.0).contains(s));
            assert_eq!(*a == 1, *s >= 0.5);
        }
        for j in 0..5 {
            let pos: f64 = (0..=k).map(|c| model.likelihood_positive(j, c)).sum();
            let neg: f64 = (0..=k).map(|c| model.likelihood_negative(j, c)).sum();
            assert!((pos - 1.0).abs() < 1e-12 && (neg - 1.0).abs() < 1e-12);
            assert!(model.prior()[j] > 0.0 && model.prior()[j] < 1.0);
        }
        assert_eq!(p, model.predict(&q).unwrap());
    }
}

#[test]
fn duplicated_rows_resolve_by_index() {
    // every training row is equidistant from the query
    let x = Matrix::from_rows(&[[1.0], [1.0], [1.0], [1.0], [1.0], [1.0], [1.0]]).unwrap();
    let y = Matrix::from_rows(&[[1u8, 0], [0, 1], [1, 1], [0, 0], [1, 0], [0, 1], [1, 1]]).unwrap();
    let model = MlknnModel::fit(&x, &y, 3, 1.0).unwrap();
    let q = Matrix::from_rows(&[[1.0]]).unwrap();
    assert_eq!(model.neighbors(q.row(0)).unwrap(), vec![0, 1, 2]);
    let first = model.predict(&q).unwrap();
    for _ in 0..5 {
        assert_eq!(first, model.predict(&q).unwrap());
    }
}
