mod common;

use std::collections::BTreeMap;

use common::{arb_graph, fixture, taxonomy};
use metamorph::interchange::{self, InterchangeError};
use metamorph::morphology::{structurally_equal, Coverage, CoveringSpec, MorphNode, RobotMorphology, SilhouetteSpec};
use metamorph::taxonomy::ConceptId;
use proptest::prelude::*;

const SHAPES: [&str; 4] = ["Sphere", "Cylinder", "Cuboid", "Disc"];

fn id(s: &str) -> ConceptId {
    ConceptId::new(s).unwrap()
}

/// Random graphs decorated with multiplicities, shape descriptors and annotations.
fn arb_annotated(max_nodes: usize) -> impl Strategy<Value = RobotMorphology> {
    (
        arb_graph(max_nodes),
        prop::collection::vec((1u32..4, prop::option::of(0..SHAPES.len())), max_nodes),
        prop::option::of(0..3usize),
        any::<bool>(),
    )
        .prop_map(|(mut m, decor, coverage, hybrid)| {
            for (n, (k, shape)) in m.nodes.iter_mut().zip(decor) {
                n.multiplicity = k;
                if let Some(s) = shape {
                    n.descriptors.insert(metamorph::morphology::DescriptorValue::new(id("Shape"), Some(SHAPES[s])));
                }
            }
            m.covering = coverage.map(|c| CoveringSpec {
                coverage: [Coverage::FullyCovered, Coverage::PartiallyCovered, Coverage::FullyVisible][c],
                materials: ["Metal".to_string()].into(),
            });
            m.silhouette = Some(if hybrid {
                SilhouetteSpec::hybrid(id("Hybrid"), id("Zoomorphic"), id("Technomorphic"))
            } else {
                SilhouetteSpec::simple(id("Technomorphic"))
            });
            m
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn json_round_trip(m in arb_annotated(8)) {
        let back = interchange::from_json(&interchange::to_json(&m)).unwrap();
        prop_assert!(structurally_equal(&m, &back).unwrap());
        prop_assert_eq!(interchange::to_json(&back), interchange::to_json(&m));
    }

    #[test]
    fn dot_is_deterministic_and_order_independent(m in arb_annotated(8)) {
        let first = interchange::to_dot(&m).unwrap();
        prop_assert_eq!(&first, &interchange::to_dot(&m).unwrap());
        let mut shuffled = m.clone();
        shuffled.nodes.reverse();
        shuffled.edges.reverse();
        prop_assert_eq!(&first, &interchange::to_dot(&shuffled).unwrap());
    }

    #[test]
    fn urdf_annotation_is_well_formed(m in arb_annotated(6), mapped in prop::collection::vec(any::<bool>(), 6)) {
        let links: BTreeMap<String, String> = m
            .nodes
            .iter()
            .zip(&mapped)
            .filter(|(_, keep)| **keep)
            .map(|(n, _)| (n.id.clone(), format!("link_{}<&>", n.id)))
            .collect();
        let xml = interchange::to_urdf_annotation(&m, &links).unwrap();
        let doc = roxmltree::Document::parse(&xml).unwrap();
        let count = doc.descendants().filter(|n| n.has_tag_name("link")).count();
        prop_assert_eq!(count, links.len());
    }
}

#[test]
fn humanoid_dot_matches_golden() {
    let record = interchange::record_from_json(&fixture("humanoid.metamorph.json")).unwrap();
    let golden = format!("{}/tests/golden/humanoid.dot", env!("CARGO_MANIFEST_DIR"));
    let expected = std::fs::read_to_string(&golden).unwrap();
    assert_eq!(interchange::to_dot(&record.morphology).unwrap(), expected);
}

#[test]
fn fixtures_round_trip_byte_for_byte() {
    for name in ["humanoid", "rover", "quadruped", "manipulator"] {
        let text = fixture(&format!("{name}.metamorph.json"));
        let record = interchange::record_from_json(&text).unwrap();
        assert!(metamorph::morphology::validate(taxonomy(), &record.morphology).is_valid(), "{name}");
        assert_eq!(interchange::record_to_json(&record), text, "{name}");
    }
}

#[test]
fn malformed_json_reports_position() {
    match interchange::record_from_json(&fixture("malformed.metamorph.json")) {
        Err(InterchangeError::Parse { line, .. }) => assert!(line > 0),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn urdf_escapes_hostile_names() {
    let mut m = RobotMorphology::new();
    m.add_node(MorphNode::new("body", id("Body")));
    m.add_node(MorphNode::new("arm\"--x", id("Arm")));
    m.add_edge("body", "arm\"--x");
    let links = BTreeMap::from([("body".to_string(), "base & \"link\"".to_string())]);
    let xml = interchange::to_urdf_annotation(&m, &links).unwrap();
    let doc = roxmltree::Document::parse(&xml).unwrap();
    let link = doc.descendants().find(|n| n.has_tag_name("link")).unwrap();
    assert_eq!(link.attribute("name"), Some("base & \"link\""));
    let unknown = BTreeMap::from([("ghost".to_string(), "l".to_string())]);
    assert_eq!(
        interchange::to_urdf_annotation(&m, &unknown),
        Err(InterchangeError::UnknownNode("ghost".into()))
    );
}
