//! Concept hierarchy: loading, validation and subsumption queries.
//!
//! A taxonomy is a rooted DAG of concepts. Each concept belongs to exactly one
//! of four kinds, and every kind has a single root concept. Queries never
//! mutate the taxonomy, so a loaded value can be shared freely between threads.

mod document;
pub mod turtle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use document::{ConceptDocument, RuleDocument, RulesSidecar, TaxonomyDocument, ValueDomainDocument};

/// Well-known concept ids the rest of the crate reasons with.
pub mod vocab {
    pub const SUBDIVISION_ROOT: &str = "MorphologicalSubdivision";
    pub const DESCRIPTOR_ROOT: &str = "MorphologicalDescriptor";
    pub const COVERING_ROOT: &str = "MorphologicalCovering";
    pub const SILHOUETTE_ROOT: &str = "MorphologicalSilhouette";

    pub const CONNECTING: &str = "ConnectingSubdivision";
    pub const TERMINAL: &str = "TerminalSubdivision";
    pub const CORE: &str = "CoreSubdivision";
    pub const HYBRID: &str = "Hybrid";
    pub const COVERING_MATERIAL: &str = "CoveringMaterial";
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TaxonomyError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("subclass cycle: {}", .0.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(" -> "))]
    Cycle(Vec<ConceptId>),
    #[error("concept `{concept}` names unknown parent `{parent}`")]
    DanglingParent { concept: ConceptId, parent: ConceptId },
    #[error("duplicate concept id `{0}`")]
    DuplicateId(ConceptId),
    #[error("invalid concept id `{0}`")]
    InvalidId(String),
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),
    #[error("`{a}` and `{b}` belong to different kinds")]
    DifferentKind { a: ConceptId, b: ConceptId },
    #[error("`{concept}` has kind {actual}, expected {expected}")]
    WrongKind {
        concept: ConceptId,
        expected: ConceptKind,
        actual: ConceptKind,
    },
    #[error("`{concept}` ({concept_kind}) has parent `{parent}` of a different kind ({parent_kind})")]
    KindMismatch {
        concept: ConceptId,
        concept_kind: ConceptKind,
        parent: ConceptId,
        parent_kind: ConceptKind,
    },
    #[error("kind {kind} has more than one root: {}", .roots.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(", "))]
    MultipleRoots { kind: ConceptKind, roots: Vec<ConceptId> },
    #[error("invalid applicability rule for `{descriptor}`: {reason}")]
    InvalidRule { descriptor: String, reason: String },
}

/// Identifier of a taxonomy concept.
///
/// Ids are case-sensitive tokens over `[A-Za-z0-9_-]`. Multi-word input such
/// as `"Connecting Subdivision"` is normalized to `ConnectingSubdivision`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ConceptId(String);

impl ConceptId {
    pub fn new(raw: &str) -> Result<Self, TaxonomyError> {
        let normalized = normalize_token(raw);
        if normalized.is_empty()
            || !normalized
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(TaxonomyError::InvalidId(raw.to_string()));
        }
        Ok(ConceptId(normalized))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Trims and joins whitespace-separated words into UpperCamelCase.
/// Single-word tokens are returned unchanged (case is significant).
pub fn normalize_token(raw: &str) -> String {
    let words: Vec<&str> = raw.split_whitespace().collect();
    if words.len() <= 1 {
        return words.first().map(|w| w.to_string()).unwrap_or_default();
    }
    let mut out = String::new();
    for w in words {
        let mut chars = w.chars();
        if let Some(first) = chars.next() {
            out.extend(first.to_uppercase());
            out.push_str(chars.as_str());
        }
    }
    out
}

impl TryFrom<String> for ConceptId {
    type Error = TaxonomyError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        ConceptId::new(&value)
    }
}

impl From<ConceptId> for String {
    fn from(id: ConceptId) -> Self {
        id.0
    }
}

impl FromStr for ConceptId {
    type Err = TaxonomyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConceptId::new(s)
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl std::borrow::Borrow<str> for ConceptId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConceptKind {
    Subdivision,
    Descriptor,
    Covering,
    Silhouette,
}

impl ConceptKind {
    pub const ALL: [ConceptKind; 4] = [
        ConceptKind::Subdivision,
        ConceptKind::Descriptor,
        ConceptKind::Covering,
        ConceptKind::Silhouette,
    ];

    /// Default root concept id for this kind.
    pub fn default_root(self) -> &'static str {
        match self {
            ConceptKind::Subdivision => vocab::SUBDIVISION_ROOT,
            ConceptKind::Descriptor => vocab::DESCRIPTOR_ROOT,
            ConceptKind::Covering => vocab::COVERING_ROOT,
            ConceptKind::Silhouette => vocab::SILHOUETTE_ROOT,
        }
    }
}

impl fmt::Display for ConceptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConceptKind::Subdivision => "Subdivision",
            ConceptKind::Descriptor => "Descriptor",
            ConceptKind::Covering => "Covering",
            ConceptKind::Silhouette => "Silhouette",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub id: ConceptId,
    pub label: String,
    pub definition: String,
    pub parents: BTreeSet<ConceptId>,
    pub kind: ConceptKind,
}

/// Values a descriptor may take.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ValueDomain {
    /// Any token, or no value at all.
    #[default]
    Any,
    Enumerated(BTreeSet<String>),
    /// Small non-negative integers (joint or finger counts).
    Count,
    /// Any strict descendant of the given concept (e.g. shapes).
    SubclassOf(ConceptId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApplicabilityRule {
    pub descriptor: ConceptId,
    pub general: bool,
    pub applicable_to: BTreeSet<ConceptId>,
    pub values: ValueDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaxonomyFormat {
    CanonicalJson,
    TurtleSubset,
}

impl TaxonomyFormat {
    /// Picks the format from a file extension: `.ttl` is Turtle, anything else JSON.
    pub fn from_path(path: &std::path::Path) -> TaxonomyFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("ttl") => TaxonomyFormat::TurtleSubset,
            _ => TaxonomyFormat::CanonicalJson,
        }
    }
}

/// An immutable, validated concept hierarchy.
#[derive(Debug, Clone)]
pub struct Taxonomy {
    version: String,
    concepts: BTreeMap<ConceptId, Concept>,
    rules: Vec<ApplicabilityRule>,
    roots: BTreeMap<ConceptKind, ConceptId>,
    depth: BTreeMap<ConceptId, usize>,
    // ancestor-or-self closure
    ancestors: BTreeMap<ConceptId, BTreeSet<ConceptId>>,
    skipped_statements: usize,
}

impl PartialEq for Taxonomy {
    fn eq(&self, other: &Self) -> bool {
        self.version == other.version && self.concepts == other.concepts && self.rules == other.rules
    }
}

impl Eq for Taxonomy {}

const BUNDLED: &str = include_str!("../../data/metamorph.taxonomy.json");

/// The taxonomy shipped with the crate.
pub fn bundled() -> Taxonomy {
    load_taxonomy(BUNDLED, TaxonomyFormat::CanonicalJson).expect("bundled taxonomy is valid")
}

/// Parses a taxonomy from text in the given format.
pub fn load_taxonomy(source: &str, format: TaxonomyFormat) -> Result<Taxonomy, TaxonomyError> {
    match format {
        TaxonomyFormat::CanonicalJson => {
            let doc: TaxonomyDocument = document::parse_json(source)?;
            Taxonomy::from_document(doc)
        }
        TaxonomyFormat::TurtleSubset => {
            let parsed = turtle::parse(source, &turtle::KindRoots::default())?;
            let mut taxonomy = Taxonomy::from_document(parsed.document)?;
            taxonomy.skipped_statements = parsed.skipped;
            Ok(taxonomy)
        }
    }
}

impl Taxonomy {
    /// Builds and validates a taxonomy from its canonical document form.
    pub fn from_document(doc: TaxonomyDocument) -> Result<Taxonomy, TaxonomyError> {
        let mut concepts = BTreeMap::new();
        for c in doc.concepts {
            let id = c.id.clone();
            let concept = Concept {
                id: c.id,
                label: c.label.unwrap_or_else(|| id.to_string()),
                definition: c.definition.unwrap_or_default(),
                parents: c.parents.into_iter().collect(),
                kind: c.kind,
            };
            if concepts.insert(id.clone(), concept).is_some() {
                return Err(TaxonomyError::DuplicateId(id));
            }
        }

        for c in concepts.values() {
            for p in &c.parents {
                if p == &c.id {
                    return Err(TaxonomyError::Cycle(vec![c.id.clone(), c.id.clone()]));
                }
                if !concepts.contains_key(p) {
                    return Err(TaxonomyError::DanglingParent {
                        concept: c.id.clone(),
                        parent: p.clone(),
                    });
                }
            }
        }

        if let Some(cycle) = find_cycle(&concepts) {
            return Err(TaxonomyError::Cycle(cycle));
        }

        for c in concepts.values() {
            for p in &c.parents {
                let parent = &concepts[p];
                if parent.kind != c.kind {
                    return Err(TaxonomyError::KindMismatch {
                        concept: c.id.clone(),
                        concept_kind: c.kind,
                        parent: p.clone(),
                        parent_kind: parent.kind,
                    });
                }
            }
        }

        let mut roots_by_kind: BTreeMap<ConceptKind, Vec<ConceptId>> = BTreeMap::new();
        for c in concepts.values().filter(|c| c.parents.is_empty()) {
            roots_by_kind.entry(c.kind).or_default().push(c.id.clone());
        }
        let mut roots = BTreeMap::new();
        for (kind, ids) in roots_by_kind {
            if ids.len() > 1 {
                return Err(TaxonomyError::MultipleRoots { kind, roots: ids });
            }
            roots.insert(kind, ids.into_iter().next().expect("non-empty"));
        }

        let mut depth = BTreeMap::new();
        let mut ancestors = BTreeMap::new();
        for id in concepts.keys() {
            compute_closure(id, &concepts, &mut depth, &mut ancestors);
        }

        let mut rules = Vec::with_capacity(doc.rules.len());
        let mut seen = BTreeSet::new();
        for r in doc.rules {
            let rule = build_rule(r, &concepts)?;
            if !seen.insert(rule.descriptor.clone()) {
                return Err(TaxonomyError::InvalidRule {
                    descriptor: rule.descriptor.to_string(),
                    reason: "more than one rule for this descriptor".into(),
                });
            }
            rules.push(rule);
        }
        rules.sort_by(|a, b| a.descriptor.cmp(&b.descriptor));

        Ok(Taxonomy {
            version: doc.version,
            concepts,
            rules,
            roots,
            depth,
            ancestors,
            skipped_statements: 0,
        })
    }

    /// Replaces the rule set with rules from a sidecar document.
    pub fn with_rules(self, rules: Vec<RuleDocument>) -> Result<Taxonomy, TaxonomyError> {
        let mut doc = self.to_document();
        doc.rules = rules;
        let skipped = self.skipped_statements;
        let mut t = Taxonomy::from_document(doc)?;
        t.skipped_statements = skipped;
        Ok(t)
    }

    pub fn to_document(&self) -> TaxonomyDocument {
        TaxonomyDocument {
            version: self.version.clone(),
            concepts: self
                .concepts
                .values()
                .map(|c| ConceptDocument {
                    id: c.id.clone(),
                    label: Some(c.label.clone()),
                    definition: Some(c.definition.clone()),
                    kind: c.kind,
                    parents: c.parents.iter().cloned().collect(),
                })
                .collect(),
            rules: self.rules.iter().map(RuleDocument::from).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document()).expect("taxonomy serializes");
        s.push('\n');
        s
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// Number of Turtle statements ignored while loading (zero for JSON input).
    pub fn skipped_statements(&self) -> usize {
        self.skipped_statements
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    pub fn rules(&self) -> &[ApplicabilityRule] {
        &self.rules
    }

    pub fn root(&self, kind: ConceptKind) -> Option<&ConceptId> {
        self.roots.get(&kind)
    }

    pub fn edge_count(&self) -> usize {
        self.concepts.values().map(|c| c.parents.len()).sum()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.concepts.contains_key(id)
    }

    pub fn get(&self, id: &str) -> Result<&Concept, TaxonomyError> {
        self.concepts
            .get(id)
            .ok_or_else(|| TaxonomyError::UnknownConcept(id.to_string()))
    }

    /// Depth of a concept: longest parent path to its kind root, root = 1.
    pub fn depth(&self, id: &str) -> Result<usize, TaxonomyError> {
        self.get(id)?;
        Ok(self.depth[id])
    }

    /// Ancestors of `id` including `id` itself.
    pub fn ancestors(&self, id: &str) -> Result<&BTreeSet<ConceptId>, TaxonomyError> {
        self.get(id)?;
        Ok(&self.ancestors[id])
    }

    /// Strict descendants of `id`, in id order.
    pub fn descendants(&self, id: &str) -> Result<Vec<&ConceptId>, TaxonomyError> {
        self.get(id)?;
        Ok(self
            .ancestors
            .iter()
            .filter(|(c, anc)| c.as_str() != id && anc.contains(id))
            .map(|(c, _)| c)
            .collect())
    }

    pub fn is_subsumed_by(&self, a: &str, b: &str) -> Result<bool, TaxonomyError> {
        self.get(b)?;
        Ok(self.ancestors(a)?.contains(b))
    }

    /// Deepest common ancestor; ties resolve to the lexicographically smallest id.
    pub fn lowest_common_ancestor(&self, a: &str, b: &str) -> Result<&ConceptId, TaxonomyError> {
        let ca = self.get(a)?;
        let cb = self.get(b)?;
        if ca.kind != cb.kind {
            return Err(TaxonomyError::DifferentKind {
                a: ca.id.clone(),
                b: cb.id.clone(),
            });
        }
        let anc_b = &self.ancestors[b];
        // BTreeSet iterates in id order, so a strict `>` keeps the smallest id on ties.
        let mut best: Option<(&ConceptId, usize)> = None;
        for c in self.ancestors[a].iter().filter(|c| anc_b.contains(*c)) {
            let d = self.depth[c];
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((c, d));
            }
        }
        best.map(|(c, _)| c).ok_or_else(|| TaxonomyError::DifferentKind {
            a: ca.id.clone(),
            b: cb.id.clone(),
        })
    }

    /// Wu-Palmer similarity `2 * depth(lca) / (depth(a) + depth(b))`.
    pub fn concept_similarity(&self, a: &str, b: &str) -> Result<f64, TaxonomyError> {
        let lca = self.lowest_common_ancestor(a, b)?;
        let d = self.depth[lca] as f64;
        Ok(2.0 * d / (self.depth[a] + self.depth[b]) as f64)
    }

    fn expect_kind(&self, id: &str, kind: ConceptKind) -> Result<&Concept, TaxonomyError> {
        let c = self.get(id)?;
        if c.kind != kind {
            return Err(TaxonomyError::WrongKind {
                concept: c.id.clone(),
                expected: kind,
                actual: c.kind,
            });
        }
        Ok(c)
    }

    /// Descriptors usable on subdivision `s`: every general descriptor plus
    /// every rule targeting `s` or one of its ancestors.
    pub fn applicable_descriptors(&self, s: &str) -> Result<BTreeSet<ConceptId>, TaxonomyError> {
        self.expect_kind(s, ConceptKind::Subdivision)?;
        let anc = &self.ancestors[s];
        Ok(self
            .rules
            .iter()
            .filter(|r| r.general || r.applicable_to.iter().any(|t| anc.contains(t)))
            .map(|r| r.descriptor.clone())
            .collect())
    }

    /// The rule governing descriptor `d`: its own, else the one of its deepest ruled ancestor.
    pub fn rule_for(&self, d: &str) -> Option<&ApplicabilityRule> {
        let anc = self.ancestors.get(d)?;
        self.rules
            .iter()
            .filter(|r| anc.contains(&r.descriptor))
            .max_by(|x, y| {
                self.depth[&x.descriptor]
                    .cmp(&self.depth[&y.descriptor])
                    .then_with(|| y.descriptor.cmp(&x.descriptor))
            })
    }

    /// Whether descriptor `d` (or an ancestor with a rule) may describe subdivision `s`.
    pub fn descriptor_applies(&self, d: &str, s: &str) -> Result<bool, TaxonomyError> {
        self.expect_kind(d, ConceptKind::Descriptor)?;
        let allowed = self.applicable_descriptors(s)?;
        Ok(self.ancestors[d].iter().any(|a| allowed.contains(a)))
    }

    /// Checks a descriptor value against the governing rule's value domain.
    pub fn value_allowed(&self, d: &str, value: Option<&str>) -> bool {
        let Some(rule) = self.rule_for(d) else {
            return true;
        };
        match (&rule.values, value) {
            (ValueDomain::Any, _) => true,
            (_, None) => true,
            (ValueDomain::Enumerated(vals), Some(v)) => vals.contains(v),
            (ValueDomain::Count, Some(v)) => v.parse::<u32>().is_ok(),
            (ValueDomain::SubclassOf(base), Some(v)) => {
                v != base.as_str()
                    && self
                        .ancestors
                        .get(v)
                        .is_some_and(|anc| anc.contains(base.as_str()))
            }
        }
    }
}

fn compute_closure(
    id: &ConceptId,
    concepts: &BTreeMap<ConceptId, Concept>,
    depth: &mut BTreeMap<ConceptId, usize>,
    ancestors: &mut BTreeMap<ConceptId, BTreeSet<ConceptId>>,
) {
    if depth.contains_key(id) {
        return;
    }
    let mut d = 1;
    let mut anc = BTreeSet::from([id.clone()]);
    for p in &concepts[id].parents {
        compute_closure(p, concepts, depth, ancestors);
        d = d.max(depth[p] + 1);
        anc.extend(ancestors[p].iter().cloned());
    }
    depth.insert(id.clone(), d);
    ancestors.insert(id.clone(), anc);
}

/// Returns one cycle witness `[c0, c1, ..., c0]` following parent edges.
fn find_cycle(concepts: &BTreeMap<ConceptId, Concept>) -> Option<Vec<ConceptId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        OnStack,
        Done,
    }
    let mut marks: BTreeMap<&ConceptId, Mark> = concepts.keys().map(|k| (k, Mark::Fresh)).collect();

    for start in concepts.keys() {
        if marks[start] != Mark::Fresh {
            continue;
        }
        // iterative DFS: (node, parent iterator)
        let mut stack: Vec<(&ConceptId, std::collections::btree_set::Iter<ConceptId>)> =
            vec![(start, concepts[start].parents.iter())];
        marks.insert(start, Mark::OnStack);
        while let Some((node, iter)) = stack.last_mut() {
            match iter.next() {
                Some(p) => match marks[p] {
                    Mark::Fresh => {
                        marks.insert(p, Mark::OnStack);
                        stack.push((p, concepts[p].parents.iter()));
                    }
                    Mark::OnStack => {
                        let pos = stack.iter().position(|(n, _)| *n == p).expect("on stack");
                        let mut cycle: Vec<ConceptId> =
                            stack[pos..].iter().map(|(n, _)| (*n).clone()).collect();
                        cycle.push(p.clone());
                        return Some(cycle);
                    }
                    Mark::Done => {}
                },
                None => {
                    let node = *node;
                    marks.insert(node, Mark::Done);
                    stack.pop();
                }
            }
        }
    }
    None
}

fn build_rule(
    r: RuleDocument,
    concepts: &BTreeMap<ConceptId, Concept>,
) -> Result<ApplicabilityRule, TaxonomyError> {
    let invalid = |reason: String| TaxonomyError::InvalidRule {
        descriptor: r.descriptor.to_string(),
        reason,
    };
    match concepts.get(&r.descriptor) {
        None => return Err(invalid("descriptor is not a known concept".into())),
        Some(c) if c.kind != ConceptKind::Descriptor => {
            return Err(invalid(format!("concept has kind {}", c.kind)))
        }
        _ => {}
    }
    if r.general && !r.applicable_to.is_empty() {
        return Err(invalid("general rule must not list applicable_to".into()));
    }
    if !r.general && r.applicable_to.is_empty() {
        return Err(invalid("specific rule needs at least one applicable_to entry".into()));
    }
    for t in &r.applicable_to {
        match concepts.get(t) {
            None => return Err(invalid(format!("applicable_to names unknown concept `{t}`"))),
            Some(c) if c.kind != ConceptKind::Subdivision => {
                return Err(invalid(format!("applicable_to `{t}` is not a subdivision")))
            }
            _ => {}
        }
    }
    let values = match r.values {
        None => ValueDomain::Any,
        Some(ValueDomainDocument::Enumerated(v)) => ValueDomain::Enumerated(v.into_iter().collect()),
        Some(ValueDomainDocument::Keyword(k)) if k == "count" => ValueDomain::Count,
        Some(ValueDomainDocument::Keyword(k)) if k == "any" => ValueDomain::Any,
        Some(ValueDomainDocument::Keyword(k)) => {
            return Err(invalid(format!("unknown value domain keyword `{k}`")))
        }
        Some(ValueDomainDocument::SubclassOf { subclass_of }) => {
            if !concepts.contains_key(&subclass_of) {
                return Err(invalid(format!("value domain names unknown concept `{subclass_of}`")));
            }
            ValueDomain::SubclassOf(subclass_of)
        }
    };
    Ok(ApplicabilityRule {
        descriptor: r.descriptor,
        general: r.general,
        applicable_to: r.applicable_to.into_iter().collect(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn concept(id: &str, kind: &str, parents: &[&str]) -> String {
        let parents: Vec<String> = parents.iter().map(|p| format!("\"{p}\"")).collect();
        format!(
            r#"{{"id":"{id}","label":"{id}","definition":"","kind":"{kind}","parents":[{}]}}"#,
            parents.join(",")
        )
    }

    fn doc(concepts: &[String], rules: &str) -> String {
        format!(r#"{{"version":"t","concepts":[{}],"rules":[{rules}]}}"#, concepts.join(","))
    }

    fn small() -> Taxonomy {
        let text = doc(
            &[
                concept("MorphologicalSubdivision", "Subdivision", &[]),
                concept("CoreSubdivision", "Subdivision", &["MorphologicalSubdivision"]),
                concept("Body", "Subdivision", &["CoreSubdivision"]),
                concept("Torso", "Subdivision", &["Body"]),
                concept("Base", "Subdivision", &["CoreSubdivision"]),
                concept("TerminalSubdivision", "Subdivision", &["MorphologicalSubdivision"]),
                concept("Manipulator", "Subdivision", &["TerminalSubdivision"]),
                concept("Hand", "Subdivision", &["Manipulator"]),
                concept("Tool", "Subdivision", &["Manipulator"]),
                concept("MorphologicalDescriptor", "Descriptor", &[]),
                concept("Shape", "Descriptor", &["MorphologicalDescriptor"]),
                concept("Cylinder", "Descriptor", &["Shape"]),
                concept("HandOrGripperConfiguration", "Descriptor", &["MorphologicalDescriptor"]),
            ],
            r#"{"descriptor":"Shape","general":true,"applicable_to":[],"values":{"subclass_of":"Shape"}},
               {"descriptor":"HandOrGripperConfiguration","general":false,"applicable_to":["Hand"],"values":"count"}"#,
        );
        load_taxonomy(&text, TaxonomyFormat::CanonicalJson).unwrap()
    }

    #[test]
    fn normalizes_multi_word_ids() {
        assert_eq!(ConceptId::new("Connecting Subdivision").unwrap().as_str(), "ConnectingSubdivision");
        assert_eq!(ConceptId::new("  Torso ").unwrap().as_str(), "Torso");
        assert_eq!(ConceptId::new("hand or gripper").unwrap().as_str(), "HandOrGripper");
        assert!(ConceptId::new("").is_err());
        assert!(ConceptId::new("a:b").is_err());
    }

    #[test]
    fn subsumption_and_lca() {
        let t = small();
        assert!(t.is_subsumed_by("Torso", "CoreSubdivision").unwrap());
        assert!(t.is_subsumed_by("Torso", "Torso").unwrap());
        assert!(!t.is_subsumed_by("Body", "Torso").unwrap());
        assert_eq!(t.lowest_common_ancestor("Torso", "Base").unwrap().as_str(), "CoreSubdivision");
        assert_eq!(t.lowest_common_ancestor("Hand", "Tool").unwrap().as_str(), "Manipulator");
        assert_eq!(t.lowest_common_ancestor("Hand", "Hand").unwrap().as_str(), "Hand");
        assert!(matches!(
            t.lowest_common_ancestor("Hand", "Shape"),
            Err(TaxonomyError::DifferentKind { .. })
        ));
        assert!(matches!(t.is_subsumed_by("Nope", "Hand"), Err(TaxonomyError::UnknownConcept(_))));
    }

    #[test]
    fn wu_palmer_from_hand_counted_depths() {
        let t = small();
        // Torso: Root(1) Core(2) Body(3) Torso(4); Base: 3; LCA Core: 2.
        assert_eq!(t.depth("Torso").unwrap(), 4);
        assert_eq!(t.depth("Base").unwrap(), 3);
        let sim = t.concept_similarity("Torso", "Base").unwrap();
        assert!((sim - 4.0 / 7.0).abs() < 1e-12);
        assert_eq!(t.concept_similarity("Hand", "Hand").unwrap(), 1.0);
    }

    #[test]
    fn applicability_rules() {
        let t = small();
        let hand = t.applicable_descriptors("Hand").unwrap();
        assert!(hand.contains("HandOrGripperConfiguration"));
        assert!(hand.contains("Shape"));
        let tool = t.applicable_descriptors("Tool").unwrap();
        assert_eq!(tool.iter().map(|c| c.as_str()).collect::<Vec<_>>(), vec!["Shape"]);
        assert!(matches!(
            t.applicable_descriptors("Shape"),
            Err(TaxonomyError::WrongKind { .. })
        ));
        assert!(t.value_allowed("Shape", Some("Cylinder")));
        assert!(!t.value_allowed("Shape", Some("Shape")));
        assert!(!t.value_allowed("Shape", Some("Torso")));
        assert!(t.value_allowed("HandOrGripperConfiguration", Some("5")));
        assert!(!t.value_allowed("HandOrGripperConfiguration", Some("five")));
    }

    #[test]
    fn rejects_cycles_with_witness() {
        let text = doc(
            &[
                concept("MorphologicalSubdivision", "Subdivision", &[]),
                concept("A", "Subdivision", &["B"]),
                concept("B", "Subdivision", &["A"]),
            ],
            "",
        );
        match load_taxonomy(&text, TaxonomyFormat::CanonicalJson) {
            Err(TaxonomyError::Cycle(w)) => {
                assert_eq!(w.first(), w.last());
                assert!(w.len() == 3);
            }
            other => panic!("expected cycle, got {other:?}"),
        }
        let selfloop = doc(&[concept("A", "Subdivision", &["A"])], "");
        assert!(matches!(
            load_taxonomy(&selfloop, TaxonomyFormat::CanonicalJson),
            Err(TaxonomyError::Cycle(_))
        ));
    }

    #[test]
    fn rejects_structural_defects() {
        let dangling = doc(&[concept("A", "Subdivision", &["Ghost"])], "");
        assert!(matches!(
            load_taxonomy(&dangling, TaxonomyFormat::CanonicalJson),
            Err(TaxonomyError::DanglingParent { .. })
        ));
        let dup = doc(&[concept("A", "Subdivision", &[]), concept("A", "Subdivision", &[])], "");
        assert!(matches!(
            load_taxonomy(&dup, TaxonomyFormat::CanonicalJson),
            Err(TaxonomyError::DuplicateId(_))
        ));
        let two_roots = doc(&[concept("A", "Subdivision", &[]), concept("B", "Subdivision", &[])], "");
        assert!(matches!(
            load_taxonomy(&two_roots, TaxonomyFormat::CanonicalJson),
            Err(TaxonomyError::MultipleRoots { .. })
        ));
        let mixed = doc(&[concept("A", "Subdivision", &[]), concept("B", "Descriptor", &["A"])], "");
        assert!(matches!(
            load_taxonomy(&mixed, TaxonomyFormat::CanonicalJson),
            Err(TaxonomyError::KindMismatch { .. })
        ));
        let bad_rule = doc(
            &[concept("A", "Descriptor", &[])],
            r#"{"descriptor":"A","general":true,"applicable_to":["A"]}"#,
        );
        assert!(matches!(
            load_taxonomy(&bad_rule, TaxonomyFormat::CanonicalJson),
            Err(TaxonomyError::InvalidRule { .. })
        ));
    }

    #[test]
    fn json_parse_errors_carry_position() {
        match load_taxonomy("{\n  \"version\": ", TaxonomyFormat::CanonicalJson) {
            Err(TaxonomyError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn document_round_trip() {
        let t = small();
        let again = load_taxonomy(&t.to_json(), TaxonomyFormat::CanonicalJson).unwrap();
        assert_eq!(t, again);
    }
}
