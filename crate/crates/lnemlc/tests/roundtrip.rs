use lnemlc::arff::{parse_arff, write_arff, ArffOptions};
use lnemlc::bundle::Bundle;
use lnemlc::formats::{read_embedding, read_folds, write_embedding, write_folds};
use lnemlc::synth::{generate, SynthOptions};
use lnemlc_core::dataset::{FoldAssignment, MultiLabelDataset};
use lnemlc_core::line::LineOrder;
use lnemlc_core::pipeline::{train, EmbedderChoice, LnemlcConfig, RegressorChoice, Sequential};
use lnemlc_core::regress::ForestConfig;
use lnemlc_core::Matrix;
use proptest::prelude::*;

fn dataset_strategy() -> impl Strategy<Value = MultiLabelDataset> {
    (1usize..12, 1usize..5, 2usize..6).prop_flat_map(|(n, m, l)| {
        (
            prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, n * m),
            prop::collection::vec(0u8..2, n * l),
            prop::collection::vec("[a-z][a-z0-9 '_-]{0,8}", m + l),
        )
            .prop_map(move |(x, y, names)| {
                // an index prefix keeps names unique
                let names: Vec<String> = names.iter().enumerate().map(|(i, s)| format!("{s}{i}")).collect();
                let features = Matrix::from_vec(n, m, x).unwrap();
                let labels = Matrix::from_vec(n, l, y).unwrap();
                MultiLabelDataset::new(features, labels, names[..m].to_vec(), names[m..].to_vec()).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arff_write_then_parse_is_identity(ds in dataset_strategy()) {
        let text = write_arff(&ds, "round trip");
        let back = parse_arff(&text, ArffOptions::new(ds.n_labels())).unwrap();
        prop_assert_eq!(back, ds);
    }

    #[test]
    fn folds_round_trip(fold_of in prop::collection::vec(0usize..4, 4..40)) {
        let k = fold_of.iter().max().unwrap() + 1;
        let folds = FoldAssignment::new(fold_of, k).unwrap();
        prop_assert_eq!(read_folds(&write_folds(&folds)).unwrap(), folds);
    }
}

fn configs() -> Vec<LnemlcConfig> {
    let quick_forest = ForestConfig {
        trees: 8,
        ..ForestConfig::default()
    };
    let mut line = LnemlcConfig::default();
    line.embedder = EmbedderChoice::line(LineOrder::Concat);
    if let EmbedderChoice::Line { sample_budget, .. } = &mut line.embedder {
        *sample_budget = Some(20_000);
    }
    line.regressor = RegressorChoice::Forest(quick_forest);
    let mut walks = LnemlcConfig::default();
    walks.embedder = EmbedderChoice::node2vec();
    if let EmbedderChoice::Node2vec { walks_per_node, .. } = &mut walks.embedder {
        *walks_per_node = 10;
    }
    walks.regressor = RegressorChoice::Ridge {
        lambda: 1.0,
        standardize: true,
    };
    vec![line, walks, LnemlcConfig::default().baseline()]
}

#[test]
fn bundle_load_of_save_is_identity() {
    let data = generate(&SynthOptions::new(80, 6, 5), 3).unwrap();
    let query = generate(&SynthOptions::new(20, 6, 5), 4).unwrap();
    for config in configs() {
        let model = train(&data, &config).unwrap();
        let bundle = Bundle {
            model,
            feature_names: data.feature_names().to_vec(),
            label_names: data.label_names().to_vec(),
            run_manifest: Some("run-manifest.json".into()),
        };
        let dir = tempfile::tempdir().unwrap();
        bundle.save(dir.path()).unwrap();
        let back = Bundle::load(dir.path()).unwrap();
        assert_eq!(back, bundle, "{config:?}");
        let a = bundle.model.predict_with(query.features(), &Sequential).unwrap();
        let b = back.model.predict_with(query.features(), &Sequential).unwrap();
        assert_eq!(a.assignments, b.assignments);
        assert_eq!(a.scores, b.scores);
    }
}

#[test]
fn embedding_text_round_trips_bitwise() {
    let data = generate(&SynthOptions::new(60, 4, 6), 9).unwrap();
    let model = train(&data, &configs()[0]).unwrap();
    let table = model.table.as_ref().unwrap();
    let names = data.label_names();
    let (read_names, back) = read_embedding(&write_embedding(table, names)).unwrap();
    assert_eq!(read_names, names);
    assert_eq!(back.vectors, table.vectors);
}
