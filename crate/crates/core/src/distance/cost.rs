use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::taxonomy::Taxonomy;

use super::DistanceError;

/// Which node attributes must agree for a free substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LabelEquality {
    /// Every substitution is free; only graph shape counts.
    StructureOnly,
    #[default]
    ConceptOnly,
    ConceptDescriptors,
    ConceptDescriptorsMultiplicity,
}

impl LabelEquality {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelEquality::StructureOnly => "structure",
            LabelEquality::ConceptOnly => "concept",
            LabelEquality::ConceptDescriptors => "concept+descriptors",
            LabelEquality::ConceptDescriptorsMultiplicity => "concept+descriptors+multiplicity",
        }
    }

    pub(crate) fn concept(self) -> bool {
        self != LabelEquality::StructureOnly
    }

    pub(crate) fn descriptors(self) -> bool {
        matches!(
            self,
            LabelEquality::ConceptDescriptors | LabelEquality::ConceptDescriptorsMultiplicity
        )
    }

    pub(crate) fn multiplicity(self) -> bool {
        self == LabelEquality::ConceptDescriptorsMultiplicity
    }
}

impl fmt::Display for LabelEquality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LabelEquality {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "structure" | "structure-only" => Ok(LabelEquality::StructureOnly),
            "concept" | "concept-only" => Ok(LabelEquality::ConceptOnly),
            "concept+descriptors" => Ok(LabelEquality::ConceptDescriptors),
            "concept+descriptors+multiplicity" => Ok(LabelEquality::ConceptDescriptorsMultiplicity),
            other => Err(format!(
                "unknown label mode `{other}` (expected structure|concept|concept+descriptors|concept+descriptors+multiplicity)"
            )),
        }
    }
}

/// Whether branch multiplicities are expanded into copies before comparing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GraphForm {
    #[default]
    Compressed,
    /// Needs a taxonomy to find the core node used as root.
    Expanded,
}

impl GraphForm {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphForm::Compressed => "compressed",
            GraphForm::Expanded => "expanded",
        }
    }
}

impl fmt::Display for GraphForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphForm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "compressed" => Ok(GraphForm::Compressed),
            "expanded" => Ok(GraphForm::Expanded),
            other => Err(format!("unknown graph form `{other}` (expected compressed|expanded)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SubstitutionCost {
    /// 0 when labels agree under the label mode, else 1.
    #[default]
    Unit,
    /// `1 - concept_similarity`, plus `descriptor_penalty` per differing
    /// descriptor token (and for a multiplicity mismatch) when the label mode
    /// compares them.
    TaxonomyWeighted { descriptor_penalty: f64 },
}

#[derive(Debug, Clone)]
pub struct CostModel {
    pub node_insert: f64,
    pub node_delete: f64,
    pub edge_insert: f64,
    pub edge_delete: f64,
    pub node_substitute: SubstitutionCost,
    pub label_equality: LabelEquality,
    pub graph_form: GraphForm,
    pub taxonomy: Option<Arc<Taxonomy>>,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            node_insert: 1.0,
            node_delete: 1.0,
            edge_insert: 1.0,
            edge_delete: 1.0,
            node_substitute: SubstitutionCost::Unit,
            label_equality: LabelEquality::ConceptOnly,
            graph_form: GraphForm::Compressed,
            taxonomy: None,
        }
    }
}

impl CostModel {
    pub fn with_taxonomy(mut self, t: Arc<Taxonomy>) -> Self {
        self.taxonomy = Some(t);
        self
    }

    pub fn with_labels(mut self, mode: LabelEquality) -> Self {
        self.label_equality = mode;
        self
    }

    pub fn with_form(mut self, form: GraphForm) -> Self {
        self.graph_form = form;
        self
    }

    pub fn is_symmetric(&self) -> bool {
        self.node_insert == self.node_delete && self.edge_insert == self.edge_delete
    }

    /// Rejects negative or non-finite costs and missing taxonomies. With
    /// `metric`, insertion and deletion costs must also match.
    pub fn check(&self, metric: bool) -> Result<(), DistanceError> {
        let mut costs = vec![
            ("node_insert", self.node_insert),
            ("node_delete", self.node_delete),
            ("edge_insert", self.edge_insert),
            ("edge_delete", self.edge_delete),
        ];
        if let SubstitutionCost::TaxonomyWeighted { descriptor_penalty } = self.node_substitute {
            costs.push(("descriptor_penalty", descriptor_penalty));
        }
        for (name, v) in costs {
            if !v.is_finite() || v < 0.0 {
                return Err(DistanceError::InvalidCostModel(format!(
                    "{name} must be a finite non-negative number, got {v}"
                )));
            }
        }
        let weighted = matches!(self.node_substitute, SubstitutionCost::TaxonomyWeighted { .. });
        if (weighted || self.graph_form == GraphForm::Expanded) && self.taxonomy.is_none() {
            return Err(DistanceError::TaxonomyRequired);
        }
        if metric && !self.is_symmetric() {
            return Err(DistanceError::InvalidCostModel(
                "metric mode needs insert and delete costs to be equal".into(),
            ));
        }
        Ok(())
    }

    /// Short human-readable summary, e.g. `unit/concept/compressed`.
    pub fn describe(&self) -> String {
        let sub = match self.node_substitute {
            SubstitutionCost::Unit => "unit".to_string(),
            SubstitutionCost::TaxonomyWeighted { descriptor_penalty } => format!("taxonomy(penalty={descriptor_penalty})"),
        };
        format!("{sub}/{}/{}", self.label_equality, self.graph_form)
    }
}
