//! Collections of annotated robots: ingest, frequency statistics and queries.

mod csv_adapter;
mod query;
mod stats;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interchange::{self, InterchangeError};
use crate::morphology::{validate, Finding, RobotMorphology};
use crate::taxonomy::Taxonomy;

pub use csv_adapter::records_from_csv;
pub use query::{query, Predicate};
pub use stats::{frequency_stats, FeatureCount, FrequencyStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Split {
    #[serde(rename = "TS")]
    Template,
    #[serde(rename = "VS")]
    Validation,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Template => "TS",
            Split::Validation => "VS",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TS" => Ok(Split::Template),
            "VS" => Ok(Split::Validation),
            other => Err(format!("unknown split `{other}` (expected TS or VS)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobotRecord {
    pub name: String,
    /// Required inside a [`Dataset`]; standalone robot files may omit it.
    pub split: Option<Split>,
    pub source_url: Option<String>,
    pub transform_variant: Option<String>,
    pub morphology: RobotMorphology,
}

impl RobotRecord {
    pub fn new(name: impl Into<String>, split: Split, morphology: RobotMorphology) -> Self {
        RobotRecord {
            name: name.into(),
            split: Some(split),
            source_url: None,
            transform_variant: None,
            morphology,
        }
    }

    pub(crate) fn unnamed(morphology: RobotMorphology) -> Self {
        RobotRecord {
            name: String::new(),
            split: None,
            source_url: None,
            transform_variant: None,
            morphology,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordFindings {
    pub record: String,
    pub findings: Vec<Finding>,
}

impl fmt::Display for RecordFindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "record `{}`: ", self.record)?;
        for (i, x) in self.findings.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

fn summarize(failures: &[RecordFindings]) -> String {
    failures.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error(transparent)]
    Parse(#[from] InterchangeError),
    #[error("validation failed for {} record(s):\n{}", .0.len(), summarize(.0))]
    ValidationFailed(Vec<RecordFindings>),
    #[error("duplicate robot name `{0}`")]
    DuplicateName(String),
    #[error("record `{0}` has no TS/VS split")]
    MissingSplit(String),
    #[error("no records selected")]
    EmptySelection,
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("predicate parse error at offset {offset}: {message}")]
    PredicateParse { offset: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    Json,
    Csv,
}

impl DatasetFormat {
    /// `.csv` selects the CSV adapter; anything else is JSON.
    pub fn from_path(path: &std::path::Path) -> DatasetFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => DatasetFormat::Csv,
            _ => DatasetFormat::Json,
        }
    }
}

/// Validated robots in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub records: Vec<RobotRecord>,
    pub taxonomy_version: String,
}

impl Dataset {
    /// Checks names, splits and every morphology against `t`.
    /// An empty `taxonomy_version` takes the taxonomy's version.
    pub fn new(records: Vec<RobotRecord>, taxonomy_version: &str, t: &Taxonomy) -> Result<Dataset, DatasetError> {
        let mut names = BTreeSet::new();
        for r in &records {
            if !names.insert(r.name.as_str()) {
                return Err(DatasetError::DuplicateName(r.name.clone()));
            }
            if r.split.is_none() {
                return Err(DatasetError::MissingSplit(r.name.clone()));
            }
        }
        let failures: Vec<RecordFindings> = records
            .iter()
            .filter_map(|r| {
                let report = validate(t, &r.morphology);
                (!report.is_valid()).then(|| RecordFindings {
                    record: r.name.clone(),
                    findings: report.errors,
                })
            })
            .collect();
        if !failures.is_empty() {
            return Err(DatasetError::ValidationFailed(failures));
        }
        let version = if taxonomy_version.is_empty() {
            t.version().to_string()
        } else {
            taxonomy_version.to_string()
        };
        Ok(Dataset {
            records,
            taxonomy_version: version,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&RobotRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn select(&self, split: Option<Split>) -> impl Iterator<Item = &RobotRecord> {
        self.records
            .iter()
            .filter(move |r| split.is_none() || r.split == split)
    }

    pub fn to_json(&self) -> String {
        interchange::dataset_to_json(self)
    }
}

/// Parses and validates a dataset document.
pub fn ingest(source: &str, format: DatasetFormat, t: &Taxonomy) -> Result<Dataset, DatasetError> {
    let (version, records) = match format {
        DatasetFormat::Json => interchange::dataset_records_from_json(source)?,
        DatasetFormat::Csv => (String::new(), csv_adapter::records_from_csv(source)?),
    };
    Dataset::new(records, &version, t)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::morphology::MorphNode;
    use crate::taxonomy::{load_taxonomy, ConceptId, TaxonomyFormat};

    pub(crate) fn taxonomy() -> Taxonomy {
        let text = include_str!("../../data/metamorph.taxonomy.json");
        load_taxonomy(text, TaxonomyFormat::CanonicalJson).unwrap()
    }

    pub(crate) fn robot(name: &str, split: Split, parts: &[(&str, &str)], edges: &[(&str, &str)]) -> RobotRecord {
        let mut m = RobotMorphology::new();
        for (id, c) in parts {
            m.add_node(MorphNode::new(*id, ConceptId::new(c).unwrap()));
        }
        for (a, b) in edges {
            m.add_edge(a, b);
        }
        RobotRecord::new(name, split, m)
    }

    #[test]
    fn empty_array_is_empty_dataset() {
        let d = ingest("[]", DatasetFormat::Json, &taxonomy()).unwrap();
        assert!(d.is_empty());
        assert_eq!(d.taxonomy_version, taxonomy().version());
    }

    #[test]
    fn dangling_edge_names_the_record() {
        let doc = r#"{"taxonomy_version":"x","records":[
            {"name":"ok","meta":{"split":"TS"},"nodes":[{"id":"b","concept":"Body"}]},
            {"name":"broken","meta":{"split":"VS"},"nodes":[{"id":"b","concept":"Body"}],"edges":[["b","ghost"]]}
        ]}"#;
        match ingest(doc, DatasetFormat::Json, &taxonomy()) {
            Err(DatasetError::ValidationFailed(f)) => {
                assert_eq!(f.len(), 1);
                assert_eq!(f[0].record, "broken");
                assert!(f[0].to_string().contains("ghost"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_names_and_missing_split() {
        let t = taxonomy();
        let a = robot("A", Split::Template, &[("b", "Body")], &[]);
        assert_eq!(
            Dataset::new(vec![a.clone(), a.clone()], "", &t),
            Err(DatasetError::DuplicateName("A".into()))
        );
        let mut b = a;
        b.split = None;
        assert_eq!(Dataset::new(vec![b], "", &t), Err(DatasetError::MissingSplit("A".into())));
    }

    #[test]
    fn json_round_trip() {
        let t = taxonomy();
        let mut r = robot("Ñandú 🤖", Split::Validation, &[("b", "Body"), ("h", "Head")], &[("b", "h")]);
        r.source_url = Some("https://example.org/r".into());
        r.transform_variant = Some("walking".into());
        let d = Dataset::new(vec![r], "v1", &t).unwrap();
        let back = ingest(&d.to_json(), DatasetFormat::Json, &t).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn split_parsing() {
        assert_eq!("ts".parse::<Split>(), Ok(Split::Template));
        assert_eq!(" VS ".parse::<Split>(), Ok(Split::Validation));
        assert!("XS".parse::<Split>().is_err());
    }
}
