use serde::{Deserialize, Serialize};

use super::{ApplicabilityRule, ConceptId, ConceptKind, TaxonomyError, ValueDomain};

/// Canonical taxonomy JSON. Every other input format is converted into this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaxonomyDocument {
    pub version: String,
    pub concepts: Vec<ConceptDocument>,
    #[serde(default)]
    pub rules: Vec<RuleDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptDocument {
    pub id: ConceptId,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub definition: Option<String>,
    pub kind: ConceptKind,
    #[serde(default)]
    pub parents: Vec<ConceptId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDocument {
    pub descriptor: ConceptId,
    pub general: bool,
    #[serde(default)]
    pub applicable_to: Vec<ConceptId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<ValueDomainDocument>,
}

/// `["a","b"]`, `"count"`, or `{"subclass_of": "Shape"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueDomainDocument {
    Enumerated(Vec<String>),
    Keyword(String),
    SubclassOf { subclass_of: ConceptId },
}

/// Rules (and optionally a kind-root mapping) shipped next to an ontology
/// that does not encode them itself.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RulesSidecar {
    #[serde(default)]
    pub kind_roots: std::collections::BTreeMap<ConceptId, ConceptKind>,
    #[serde(default)]
    pub rules: Vec<RuleDocument>,
}

impl RulesSidecar {
    pub fn from_json(text: &str) -> Result<RulesSidecar, TaxonomyError> {
        serde_json::from_str(text).map_err(json_error)
    }
}

impl From<&ApplicabilityRule> for RuleDocument {
    fn from(r: &ApplicabilityRule) -> Self {
        RuleDocument {
            descriptor: r.descriptor.clone(),
            general: r.general,
            applicable_to: r.applicable_to.iter().cloned().collect(),
            values: match &r.values {
                ValueDomain::Any => None,
                ValueDomain::Enumerated(v) => Some(ValueDomainDocument::Enumerated(v.iter().cloned().collect())),
                ValueDomain::Count => Some(ValueDomainDocument::Keyword("count".into())),
                ValueDomain::SubclassOf(c) => Some(ValueDomainDocument::SubclassOf { subclass_of: c.clone() }),
            },
        }
    }
}

pub(super) fn parse_json(text: &str) -> Result<TaxonomyDocument, TaxonomyError> {
    serde_json::from_str(text).map_err(json_error)
}

pub(crate) fn json_error(e: serde_json::Error) -> TaxonomyError {
    TaxonomyError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}
