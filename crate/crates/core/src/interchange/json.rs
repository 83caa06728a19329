use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, RobotRecord, Split};
use crate::morphology::{
    canonicalize, Coverage, CoveringSpec, DescriptorValue, MorphEdge, MorphNode, RobotMorphology, SilhouetteSpec,
};
use crate::taxonomy::ConceptId;

use super::InterchangeError;

// Field order of these structs is the on-disk key order.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RobotJson {
    #[serde(default)]
    name: String,
    #[serde(default)]
    meta: MetaJson,
    #[serde(default)]
    covering: Option<CoveringJson>,
    #[serde(default)]
    silhouette: Option<SilhouetteJson>,
    #[serde(default)]
    nodes: Vec<NodeJson>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaJson {
    #[serde(default)]
    source: Option<String>,
    #[serde(default)]
    split: Option<Split>,
    #[serde(default)]
    transform_variant: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoveringJson {
    coverage: String,
    #[serde(default)]
    materials: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SilhouetteJson {
    primary: ConceptId,
    #[serde(default)]
    hybrid: Vec<ConceptId>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeJson {
    id: String,
    concept: ConceptId,
    #[serde(default = "one")]
    multiplicity: u32,
    #[serde(default)]
    descriptors: Vec<DescriptorJson>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorJson {
    descriptor: ConceptId,
    #[serde(default)]
    value: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum DatasetJson {
    WithHeader {
        #[serde(default)]
        taxonomy_version: String,
        records: Vec<RobotJson>,
    },
    Bare(Vec<RobotJson>),
}

#[derive(Serialize)]
struct DatasetOut<'a> {
    taxonomy_version: &'a str,
    records: Vec<RobotJson>,
}

fn parse_error(e: serde_json::Error) -> InterchangeError {
    InterchangeError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

impl RobotJson {
    fn from_record(r: &RobotRecord) -> RobotJson {
        let m = &r.morphology;
        RobotJson {
            name: r.name.clone(),
            meta: MetaJson {
                source: r.source_url.clone(),
                split: r.split,
                transform_variant: r.transform_variant.clone(),
            },
            covering: m.covering.as_ref().map(|c| CoveringJson {
                coverage: c.coverage.to_string(),
                materials: c.materials.iter().cloned().collect(),
            }),
            silhouette: m.silhouette.as_ref().map(|s| SilhouetteJson {
                primary: s.primary.clone(),
                hybrid: s.hybrid.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect(),
            }),
            nodes: m
                .nodes
                .iter()
                .map(|n| NodeJson {
                    id: n.id.clone(),
                    concept: n.concept.clone(),
                    multiplicity: n.multiplicity,
                    descriptors: n
                        .descriptors
                        .iter()
                        .map(|d| DescriptorJson {
                            descriptor: d.descriptor.clone(),
                            value: d.value.clone(),
                        })
                        .collect(),
                })
                .collect(),
            edges: m
                .edges
                .iter()
                .map(|e| {
                    let (a, b) = e.endpoints();
                    (a.to_string(), b.to_string())
                })
                .collect(),
        }
    }

    fn into_record(self) -> Result<RobotRecord, InterchangeError> {
        let locus = |what: String| InterchangeError::Schema {
            record: self.name.clone(),
            message: what,
        };
        let covering = match &self.covering {
            None => None,
            Some(c) => Some(CoveringSpec {
                coverage: c.coverage.parse::<Coverage>().map_err(locus)?,
                materials: c.materials.iter().map(|m| m.trim().to_string()).collect(),
            }),
        };
        let silhouette = match &self.silhouette {
            None => None,
            Some(s) => match s.hybrid.as_slice() {
                [] => Some(SilhouetteSpec::simple(s.primary.clone())),
                [a, b] => Some(SilhouetteSpec::hybrid(s.primary.clone(), a.clone(), b.clone())),
                other => {
                    return Err(locus(format!(
                        "silhouette hybrid must list exactly two components, found {}",
                        other.len()
                    )))
                }
            },
        };
        let nodes = self
            .nodes
            .into_iter()
            .map(|n| MorphNode {
                id: n.id,
                concept: n.concept,
                multiplicity: n.multiplicity,
                descriptors: n
                    .descriptors
                    .into_iter()
                    .map(|d| DescriptorValue {
                        descriptor: d.descriptor,
                        value: d.value,
                    })
                    .collect::<BTreeSet<_>>(),
            })
            .collect();
        Ok(RobotRecord {
            name: self.name,
            split: self.meta.split,
            source_url: self.meta.source,
            transform_variant: self.meta.transform_variant,
            morphology: RobotMorphology {
                nodes,
                edges: self.edges.into_iter().map(|(a, b)| MorphEdge::new(a, b)).collect(),
                covering,
                silhouette,
            },
        })
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON model serializes");
    s.push('\n');
    s
}

/// Parses one canonical robot document.
pub fn record_from_json(text: &str) -> Result<RobotRecord, InterchangeError> {
    let raw: RobotJson = serde_json::from_str(text).map_err(parse_error)?;
    raw.into_record()
}

pub fn record_to_json(record: &RobotRecord) -> String {
    pretty(&RobotJson::from_record(record))
}

/// Serializes a bare morphology as an unnamed robot document.
pub fn to_json(m: &RobotMorphology) -> String {
    record_to_json(&RobotRecord::unnamed(m.clone()))
}

pub fn from_json(text: &str) -> Result<RobotMorphology, InterchangeError> {
    Ok(record_from_json(text)?.morphology)
}

/// `from_json(to_json(m))`, compared in canonical form.
pub fn round_trip(m: &RobotMorphology) -> Result<RobotMorphology, InterchangeError> {
    let back = from_json(&to_json(m))?;
    Ok(canonicalize(&back)?)
}

/// Parses a dataset document: `{taxonomy_version, records: [...]}` or a bare array.
/// Records are returned unvalidated; see [`crate::dataset::ingest`].
pub fn dataset_records_from_json(text: &str) -> Result<(String, Vec<RobotRecord>), InterchangeError> {
    let raw: DatasetJson = serde_json::from_str(text).map_err(parse_error)?;
    let (version, robots) = match raw {
        DatasetJson::WithHeader {
            taxonomy_version,
            records,
        } => (taxonomy_version, records),
        DatasetJson::Bare(records) => (String::new(), records),
    };
    let records = robots
        .into_iter()
        .map(RobotJson::into_record)
        .collect::<Result<Vec<_>, _>>()?;
    Ok((version, records))
}

pub fn dataset_to_json(d: &Dataset) -> String {
    pretty(&DatasetOut {
        taxonomy_version: &d.taxonomy_version,
        records: d.records.iter().map(RobotJson::from_record).collect(),
    })
}

/// True if the document looks like a dataset rather than a single robot.
pub fn is_dataset_document(text: &str) -> bool {
    match serde_json::from_str::<serde_json::Value>(text) {
        Ok(serde_json::Value::Array(_)) => true,
        Ok(serde_json::Value::Object(o)) => o.contains_key("records"),
        _ => false,
    }
}
