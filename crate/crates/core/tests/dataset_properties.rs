mod common;

use common::{arb_graph, taxonomy};
use metamorph::dataset::{frequency_stats, ingest, query, Dataset, DatasetError, DatasetFormat, RobotRecord, Split};
use metamorph::distance::{jaccard_index, nearest_neighbors, Budget, CostModel, Metric};
use metamorph::morphology::{feature_set, FeatureProfile, RobotMorphology};
use proptest::prelude::*;

fn arb_dataset(max_robots: usize) -> impl Strategy<Value = Dataset> {
    prop::collection::vec((arb_graph(6), any::<bool>()), 1..=max_robots).prop_map(|robots| {
        let records = robots
            .into_iter()
            .enumerate()
            .map(|(i, (m, ts))| RobotRecord::new(format!("r{i:02}"), if ts { Split::Template } else { Split::Validation }, m))
            .collect();
        Dataset::new(records, "", taxonomy()).unwrap()
    })
}

fn has(m: &RobotMorphology, concept: &str) -> bool {
    m.nodes.iter().any(|n| n.concept.as_str() == concept)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn counts_sum_to_feature_set_sizes(d in arb_dataset(12)) {
        let s = frequency_stats(&d, None, FeatureProfile::ConceptsOnly).unwrap();
        let total: usize = s.features.iter().map(|f| f.count).sum();
        let expected: usize = d.records.iter().map(|r| feature_set(&r.morphology, FeatureProfile::ConceptsOnly).unwrap().len()).sum();
        prop_assert_eq!(total, expected);
        prop_assert!(s.features.windows(2).all(|w| (w[1].count, &w[0].feature) <= (w[0].count, &w[1].feature)));
    }

    #[test]
    fn z_scores_are_standardized(d in arb_dataset(12)) {
        let s = frequency_stats(&d, None, FeatureProfile::ConceptsOnly).unwrap();
        if s.sd > 0.0 {
            let z: Vec<f64> = s.features.iter().map(|f| f.z.unwrap()).collect();
            let n = z.len() as f64;
            let mean = z.iter().sum::<f64>() / n;
            let sd = (z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
            prop_assert!(mean.abs() < 1e-9);
            prop_assert!((sd - 1.0).abs() < 1e-9);
        } else {
            prop_assert!(s.features.iter().all(|f| f.z.is_none()));
        }
    }

    #[test]
    fn splits_partition_the_dataset(d in arb_dataset(12)) {
        let ts = d.select(Some(Split::Template)).count();
        let vs = d.select(Some(Split::Validation)).count();
        prop_assert_eq!(ts + vs, d.len());
    }

    #[test]
    fn dataset_json_round_trip(d in arb_dataset(8)) {
        let back = ingest(&d.to_json(), DatasetFormat::Json, taxonomy()).unwrap();
        prop_assert_eq!(back.len(), d.len());
        for (x, y) in d.records.iter().zip(&back.records) {
            prop_assert_eq!(&x.name, &y.name);
            prop_assert_eq!(x.split, y.split);
            prop_assert!(metamorph::morphology::structurally_equal(&x.morphology, &y.morphology).unwrap());
        }
        prop_assert_eq!(back.to_json(), d.to_json());
    }

    #[test]
    fn query_matches_linear_scan(d in arb_dataset(12)) {
        let got: Vec<&str> = query(&d, "has(Wheel) and not has(Leg)", None).map(|v| v.iter().map(|r| r.name.as_str()).collect()).unwrap_or_default();
        let expected: Vec<&str> = d.records.iter().filter(|r| has(&r.morphology, "Wheel") && !has(&r.morphology, "Leg")).map(|r| r.name.as_str()).collect();
        // UnknownFeature is only raised when no record mentions a token
        if d.records.iter().any(|r| has(&r.morphology, "Wheel")) && d.records.iter().any(|r| has(&r.morphology, "Leg")) {
            prop_assert_eq!(got, expected);
        }
        prop_assert_eq!(query(&d, "", None).unwrap().len(), d.len());
    }

    #[test]
    fn jaccard_is_bounded_and_reflexive(a in arb_graph(8), b in arb_graph(8)) {
        for p in [FeatureProfile::ConceptsOnly, FeatureProfile::Full] {
            let (fa, fb) = (feature_set(&a, p).unwrap(), feature_set(&b, p).unwrap());
            let j = jaccard_index(&fa, &fb);
            prop_assert!((0.0..=1.0).contains(&j));
            prop_assert_eq!(j, jaccard_index(&fb, &fa));
            prop_assert_eq!(jaccard_index(&fa, &fa), 1.0);
        }
    }

    #[test]
    fn knn_is_sorted_and_sized(d in arb_dataset(10), k in 1usize..10) {
        let probe = d.records[0].morphology.clone();
        let c = CostModel::default();
        match nearest_neighbors(&d, &probe, k, Metric::GedExact, &c, Budget::default()) {
            Ok(list) => {
                prop_assert_eq!(list.len(), k);
                prop_assert_eq!(list[0].distance, 0.0);
                prop_assert!(list.windows(2).all(|w| (w[0].distance, &w[0].name) <= (w[1].distance, &w[1].name)));
            }
            Err(e) => prop_assert!(k > d.len(), "{e}"),
        }
    }
}

#[test]
fn query_rejects_unknown_features_and_bad_syntax() {
    let d = ingest(
        include_str!("../data/examples.dataset.json"),
        DatasetFormat::Json,
        taxonomy(),
    )
    .unwrap();
    assert!(matches!(query(&d, "has(Nonexistent)", None), Err(DatasetError::UnknownFeature(_))));
    assert!(matches!(query(&d, "has(Wheel) and", None), Err(DatasetError::PredicateParse { .. })));
    // with a taxonomy, has(GroundSupport) also matches Wheel and Foot
    let direct = query(&d, "has(Wheel)", None).unwrap();
    let subsumed = query(&d, "has(GroundSupport)", Some(taxonomy())).unwrap();
    assert!(direct.iter().all(|r| subsumed.iter().any(|s| s.name == r.name)));
}

#[test]
fn dangling_record_names_the_record() {
    let text = format!("[{}]", common::fixture("dangling.metamorph.json"));
    match ingest(&text, DatasetFormat::Json, taxonomy()) {
        Err(DatasetError::ValidationFailed(f)) => assert_eq!(f[0].record, "broken"),
        other => panic!("expected ValidationFailed, got {other:?}"),
    }
}

#[test]
fn empty_array_is_an_empty_dataset() {
    assert!(ingest("[]", DatasetFormat::Json, taxonomy()).unwrap().is_empty());
}

#[test]
fn csv_import_matches_json() {
    let csv = "robot,split,feature,multiplicity,neighbor,descriptors\n\
               rover,TS,b:Base,,w:Wheel,\n\
               rover,TS,w:Wheel,4,,Shape=Disc\n\
               rover,TS,covering:FullyVisible,,,\n";
    let d = ingest(csv, DatasetFormat::Csv, taxonomy()).unwrap();
    let m = &d.get("rover").unwrap().morphology;
    assert_eq!(m.nodes.len(), 2);
    assert_eq!(m.node("w").unwrap().multiplicity, 4);
    assert_eq!(m.edges.len(), 1);
    let bad = "robot,split,feature\nr,XX,Body\n";
    match ingest(bad, DatasetFormat::Csv, taxonomy()) {
        Err(DatasetError::Parse(metamorph::interchange::InterchangeError::Parse { line, .. })) => assert_eq!(line, 2),
        other => panic!("expected a CSV parse error, got {other:?}"),
    }
}
