//! One-way CSV import.
//!
//! Columns: `robot`, `split`, `feature`, and optionally `multiplicity`,
//! `neighbor` and `descriptors`. Each row names one node and at most one
//! edge. A node cell is `Concept` (the id is the concept token) or
//! `id:Concept`. Cells prefixed `covering:`, `material:`, `silhouette:` or
//! `hybrid:` set robot-level annotations instead. `descriptors` holds
//! `Descriptor=value` or bare `Descriptor` tokens separated by `;`.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::interchange::InterchangeError;
use crate::morphology::{Coverage, CoveringSpec, DescriptorValue, MorphEdge, MorphNode, RobotMorphology, SilhouetteSpec};
use crate::taxonomy::ConceptId;

use super::{RobotRecord, Split};

#[derive(Debug, Deserialize)]
struct Row {
    robot: String,
    split: String,
    feature: String,
    #[serde(default)]
    multiplicity: Option<u32>,
    #[serde(default)]
    neighbor: Option<String>,
    #[serde(default)]
    descriptors: Option<String>,
}

#[derive(Default)]
struct Builder {
    split: Option<Split>,
    nodes: BTreeMap<String, (ConceptId, Option<u32>, Vec<DescriptorValue>)>,
    order: Vec<String>,
    edges: Vec<MorphEdge>,
    coverage: Option<Coverage>,
    materials: Vec<String>,
    silhouette: Option<ConceptId>,
    hybrid: Vec<ConceptId>,
}

enum Cell {
    Node(String, ConceptId),
    Covering(Coverage),
    Material(String),
    Silhouette(ConceptId),
    Hybrid(ConceptId),
}

fn err(line: usize, message: String) -> InterchangeError {
    InterchangeError::Parse {
        line,
        column: 0,
        message,
    }
}

fn concept(line: usize, raw: &str) -> Result<ConceptId, InterchangeError> {
    ConceptId::new(raw).map_err(|e| err(line, e.to_string()))
}

fn parse_cell(line: usize, raw: &str) -> Result<Cell, InterchangeError> {
    let raw = raw.trim();
    let Some((head, tail)) = raw.split_once(':') else {
        let c = concept(line, raw)?;
        return Ok(Cell::Node(c.to_string(), c));
    };
    let tail = tail.trim();
    Ok(match head.trim() {
        "covering" => Cell::Covering(tail.parse().map_err(|e: String| err(line, e))?),
        "material" => Cell::Material(tail.to_string()),
        "silhouette" => Cell::Silhouette(concept(line, tail)?),
        "hybrid" => Cell::Hybrid(concept(line, tail)?),
        id => Cell::Node(id.to_string(), concept(line, tail)?),
    })
}

fn parse_descriptors(line: usize, raw: &str) -> Result<Vec<DescriptorValue>, InterchangeError> {
    raw.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.split_once('=') {
            Some((d, v)) => Ok(DescriptorValue::new(concept(line, d)?, Some(v.trim()))),
            None => Ok(DescriptorValue::new(concept(line, t)?, None)),
        })
        .collect()
}

impl Builder {
    fn node(&mut self, id: String, c: ConceptId, line: usize) -> Result<(), InterchangeError> {
        match self.nodes.get(&id) {
            Some((existing, _, _)) if *existing != c => Err(err(
                line,
                format!("node `{id}` is given concepts `{existing}` and `{c}`"),
            )),
            Some(_) => Ok(()),
            None => {
                self.order.push(id.clone());
                self.nodes.insert(id, (c, None, Vec::new()));
                Ok(())
            }
        }
    }

    fn finish(self, name: String) -> Result<RobotRecord, InterchangeError> {
        let mut nodes = self.nodes;
        let morph_nodes = self
            .order
            .iter()
            .map(|id| {
                let (c, k, ds) = nodes.remove(id).expect("ordered id present");
                let mut n = MorphNode::new(id.clone(), c).with_multiplicity(k.unwrap_or(1));
                n.descriptors.extend(ds);
                n
            })
            .collect();
        let covering = self.coverage.map(|coverage| CoveringSpec {
            coverage,
            materials: self.materials.into_iter().collect(),
        });
        let silhouette = match (self.silhouette, self.hybrid.as_slice()) {
            (None, []) => None,
            (None, _) => {
                return Err(err(0, format!("robot `{name}` lists hybrid components without a silhouette")))
            }
            (Some(p), []) => Some(SilhouetteSpec::simple(p)),
            (Some(p), [a, b]) => Some(SilhouetteSpec::hybrid(p, a.clone(), b.clone())),
            (Some(_), other) => {
                return Err(err(
                    0,
                    format!("robot `{name}` lists {} hybrid components, expected 2", other.len()),
                ))
            }
        };
        Ok(RobotRecord {
            name,
            split: self.split,
            source_url: None,
            transform_variant: None,
            morphology: RobotMorphology {
                nodes: morph_nodes,
                edges: self.edges,
                covering,
                silhouette,
            },
        })
    }
}

/// Robots in order of first appearance. Repeated edges collapse to one.
/// Parses CSV rows into unvalidated records, in order of first appearance.
pub fn records_from_csv(text: &str) -> Result<Vec<RobotRecord>, InterchangeError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut robots: Vec<(String, Builder)> = Vec::new();
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        // header is line 1
        let line = i + 2;
        let row = row.map_err(|e| err(e.position().map_or(line, |p| p.line() as usize), e.to_string()))?;
        let idx = match robots.iter().position(|(n, _)| *n == row.robot) {
            Some(i) => i,
            None => {
                robots.push((row.robot.clone(), Builder::default()));
                robots.len() - 1
            }
        };
        let b = &mut robots[idx].1;
        let split: Split = row.split.parse().map_err(|e: String| err(line, e))?;
        match b.split {
            Some(s) if s != split => {
                return Err(err(line, format!("robot `{}` is listed in both TS and VS", row.robot)))
            }
            _ => b.split = Some(split),
        }
        match parse_cell(line, &row.feature)? {
            Cell::Node(id, c) => {
                b.node(id.clone(), c, line)?;
                let entry = b.nodes.get_mut(&id).expect("inserted above");
                if let Some(k) = row.multiplicity {
                    match entry.1 {
                        Some(prev) if prev != k => {
                            return Err(err(line, format!("node `{id}` has multiplicities {prev} and {k}")))
                        }
                        _ => entry.1 = Some(k),
                    }
                }
                if let Some(ds) = &row.descriptors {
                    for d in parse_descriptors(line, ds)? {
                        if !entry.2.contains(&d) {
                            entry.2.push(d);
                        }
                    }
                }
                if let Some(nb) = row.neighbor.as_deref().filter(|s| !s.is_empty()) {
                    let Cell::Node(nid, nc) = parse_cell(line, nb)? else {
                        return Err(err(line, format!("neighbor `{nb}` is not a node")));
                    };
                    b.node(nid.clone(), nc, line)?;
                    let e = MorphEdge::new(id, nid);
                    if !b.edges.contains(&e) {
                        b.edges.push(e);
                    }
                }
            }
            Cell::Covering(c) => match b.coverage {
                Some(prev) if prev != c => {
                    return Err(err(line, format!("robot `{}` has coverings {prev} and {c}", row.robot)))
                }
                _ => b.coverage = Some(c),
            },
            Cell::Material(m) => {
                if !b.materials.contains(&m) {
                    b.materials.push(m);
                }
            }
            Cell::Silhouette(s) => b.silhouette = Some(s),
            Cell::Hybrid(h) => {
                if !b.hybrid.contains(&h) {
                    b.hybrid.push(h);
                }
            }
        }
    }
    robots.into_iter().map(|(name, b)| b.finish(name)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ingest, tests::taxonomy, DatasetFormat};

    const SAMPLE: &str = "\
robot,split,feature,multiplicity,neighbor,descriptors
Rover,TS,body:Body,,wheel:Wheel,
Rover,TS,wheel:Wheel,4,,Shape=Disc
Rover,TS,covering:PartiallyCovered,,,
Rover,TS,material:Metal,,,
Rover,TS,silhouette:Technomorphic,,,
Walker,VS,Body,,Leg,
Walker,VS,Leg,2,Foot,
Walker,VS,Leg,2,Body,
";

    #[test]
    fn rows_build_graphs() {
        let records = records_from_csv(SAMPLE).unwrap();
        assert_eq!(records.len(), 2);
        let rover = &records[0].morphology;
        assert_eq!(rover.nodes.len(), 2);
        assert_eq!(rover.node("wheel").unwrap().multiplicity, 4);
        assert_eq!(rover.node("wheel").unwrap().descriptor_tokens(), vec!["Shape=Disc"]);
        assert_eq!(rover.covering.as_ref().unwrap().coverage, Coverage::PartiallyCovered);
        let walker = &records[1].morphology;
        assert_eq!(walker.nodes.len(), 3);
        // Body--Leg listed twice
        assert_eq!(walker.edges.len(), 2);
        assert_eq!(records[1].split, Some(Split::Validation));
        ingest(SAMPLE, DatasetFormat::Csv, &taxonomy()).unwrap();
    }

    #[test]
    fn conflicting_split_is_rejected_with_line() {
        let text = "robot,split,feature\nA,TS,Body\nA,VS,Head\n";
        match records_from_csv(text) {
            Err(InterchangeError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
