use lnemlc_core::aggregate::{aggregate, AggregationKind};
use lnemlc_core::line::{EmbeddingKind, EmbeddingTable};
use lnemlc_core::metrics::{evaluate, hamming_loss, micro_macro_prf, subset_accuracy};
use lnemlc_core::{LabelMatrix, Matrix};
use proptest::prelude::*;

fn label_pair(rows: usize, cols: usize) -> impl Strategy<Value = (LabelMatrix, LabelMatrix)> {
    let cells = proptest::collection::vec(0u8..=1, rows * cols);
    (cells.clone(), cells).prop_map(move |(a, b)| {
        (Matrix::from_vec(rows, cols, a).unwrap(), Matrix::from_vec(rows, cols, b).unwrap())
    })
}

fn table(values: Vec<f64>, l: usize, d: usize) -> EmbeddingTable {
    EmbeddingTable::new(Matrix::from_vec(l, d, values).unwrap(), EmbeddingKind::External).unwrap()
}

proptest! {
    #[test]
    fn measures_ignore_row_order((t, p) in label_pair(12, 5), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..12).collect();
        let mut s = seed;
        for i in (1..12).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = evaluate(&t, &p).unwrap();
        let b = evaluate(&t.select_rows(&order), &p.select_rows(&order)).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn single_label_macro_f1_is_micro_f1((t, p) in label_pair(30, 1)) {
        let s = micro_macro_prf(&t, &p).unwrap();
        prop_assert!((s.macro_f1 - s.micro_f1).abs() < 1e-12);
    }

    #[test]
    fn perfect_subset_iff_zero_hamming((t, p) in label_pair(6, 3)) {
        let sa = subset_accuracy(&t, &p).unwrap();
        let hl = hamming_loss(&t, &p).unwrap();
        prop_assert_eq!(sa == 1.0, hl == 0.0);
        prop_assert_eq!(subset_accuracy(&t, &t).unwrap(), 1.0);
        let r = evaluate(&t, &p).unwrap();
        prop_assert!(r.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn aggregation_is_symmetric(
        values in proptest::collection::vec(-2.0f64..2.0, 5 * 3),
        labels in proptest::collection::vec(0u8..=1, 5),
    ) {
        // permuting label columns together with table rows is a relabelling
        let t = table(values.clone(), 5, 3);
        let y = Matrix::from_vec(1, 5, labels.clone()).unwrap();
        let perm = [3usize, 0, 4, 1, 2];
        let permuted_values: Vec<f64> = perm.iter().flat_map(|&j| values[j * 3..j * 3 + 3].to_vec()).collect();
        let permuted_labels: Vec<u8> = perm.iter().map(|&j| labels[j]).collect();
        let tp = table(permuted_values, 5, 3);
        let yp = Matrix::from_vec(1, 5, permuted_labels).unwrap();
        for kind in [AggregationKind::Sum, AggregationKind::Mean, AggregationKind::Product] {
            let a = aggregate(&y, &t, kind).unwrap();
            let b = aggregate(&yp, &tp, kind).unwrap();
            for (u, v) in a.vectors.as_slice().iter().zip(b.vectors.as_slice()) {
                prop_assert!((u - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sum_and_mean_are_linear_in_the_table(
        a in proptest::collection::vec(-2.0f64..2.0, 4 * 2),
        b in proptest::collection::vec(-2.0f64..2.0, 4 * 2),
        labels in proptest::collection::vec(0u8..=1, 3 * 4),
        alpha in -3.0f64..3.0,
    ) {
        let y = Matrix::from_vec(3, 4, labels).unwrap();
        let combo: Vec<f64> = a.iter().zip(&b).map(|(u, v)| alpha * u + v).collect();
        for kind in [AggregationKind::Sum, AggregationKind::Mean] {
            let ea = aggregate(&y, &table(a.clone(), 4, 2), kind).unwrap().vectors;
            let eb = aggregate(&y, &table(b.clone(), 4, 2), kind).unwrap().vectors;
            let ec = aggregate(&y, &table(combo.clone(), 4, 2), kind).unwrap().vectors;
            for i in 0..6 {
                let expected = alpha * ea.as_slice()[i] + eb.as_slice()[i];
                prop_assert!((ec.as_slice()[i] - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn identical_label_sets_give_identical_rows(
        values in proptest::collection::vec(-2.0f64..2.0, 6 * 4),
        labels in proptest::collection::vec(0u8..=1, 6),
    ) {
        let t = table(values, 6, 4);
        let y = Matrix::from_rows(&[labels.clone(), labels]).unwrap();
        for kind in [AggregationKind::Sum, AggregationKind::Mean, AggregationKind::Product] {
            let e = aggregate(&y, &t, kind).unwrap().vectors;
            prop_assert_eq!(e.row(0), e.row(1));
        }
    }
}

#[test]
fn product_is_not_linear() {
    let y = Matrix::from_rows(&[[1u8, 1]]).unwrap();
    let a = table(vec![1.0, 2.0, 3.0, 4.0], 2, 2);
    let doubled = table(vec![2.0, 4.0, 6.0, 8.0], 2, 2);
    let ea = aggregate(&y, &a, AggregationKind::Product).unwrap().vectors;
    let e2 = aggregate(&y, &doubled, AggregationKind::Product).unwrap().vectors;
    let scaled: Vec<f64> = ea.as_slice().iter().map(|v| 2.0 * v).collect();
    assert_ne!(e2.as_slice(), &scaled[..]);
}

#[test]
fn mean_is_sum_over_cardinality() {
    use rand::Rng;
    let mut r = lnemlc_core::rng::seeded(100);
    let t = table((0..8 * 5).map(|_| r.gen_range(-1.0..1.0)).collect(), 8, 5);
    let y = Matrix::from_vec(100, 8, (0..800).map(|_| u8::from(r.gen_bool(0.4))).collect()).unwrap();
    let sum = aggregate(&y, &t, AggregationKind::Sum).unwrap().vectors;
    let mean = aggregate(&y, &t, AggregationKind::Mean).unwrap().vectors;
    for i in 0..100 {
        let card = y.row(i).iter().filter(|&&v| v == 1).count();
        for j in 0..5 {
            let expected = if card == 0 { 0.0 } else { sum.get(i, j) / card as f64 };
            assert!((mean.get(i, j) - expected).abs() < 1e-12);
        }
    }
}
