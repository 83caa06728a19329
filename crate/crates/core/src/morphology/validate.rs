use std::collections::BTreeSet;
use std::fmt;

use crate::taxonomy::{vocab, ConceptKind, Taxonomy};

use super::RobotMorphology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingCode {
    // errors
    UnknownConcept,
    WrongKind,
    UnknownDescriptor,
    DescriptorNotApplicable,
    InvalidDescriptorValue,
    ZeroMultiplicity,
    DuplicateNodeId,
    DanglingEdge,
    SelfLoop,
    DuplicateEdge,
    DisconnectedGraph,
    CoveringWithoutMaterials,
    HybridMismatch,
    // lints
    TerminalDegree,
    ConnectingDegree,
    NoCoreNode,
    UnknownMaterial,
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Locus {
    Robot,
    Node(String),
    Edge(String, String),
    Covering,
    Silhouette,
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Robot => f.write_str("robot"),
            Locus::Node(id) => write!(f, "node `{id}`"),
            Locus::Edge(a, b) => write!(f, "edge `{a}`--`{b}`"),
            Locus::Covering => f.write_str("covering"),
            Locus::Silhouette => f.write_str("silhouette"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub code: FindingCode,
    pub locus: Locus,
    pub message: String,
}

impl Finding {
    fn new(code: FindingCode, locus: Locus, message: impl Into<String>) -> Self {
        Finding {
            code,
            locus,
            message: message.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.locus, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub errors: Vec<Finding>,
    pub lints: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Graph-shape errors that need no taxonomy.
pub(crate) fn structural_errors(m: &RobotMorphology) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut ids = BTreeSet::new();
    for n in &m.nodes {
        if !ids.insert(n.id.as_str()) {
            out.push(Finding::new(
                FindingCode::DuplicateNodeId,
                Locus::Node(n.id.clone()),
                "node id used more than once",
            ));
        }
        if n.multiplicity < 1 {
            out.push(Finding::new(
                FindingCode::ZeroMultiplicity,
                Locus::Node(n.id.clone()),
                "multiplicity must be at least 1",
            ));
        }
    }
    let mut seen = BTreeSet::new();
    for e in &m.edges {
        let (a, b) = e.endpoints();
        let locus = Locus::Edge(a.to_string(), b.to_string());
        if a == b {
            out.push(Finding::new(FindingCode::SelfLoop, locus, "edge endpoints must differ"));
            continue;
        }
        for end in [a, b] {
            if !ids.contains(end) {
                out.push(Finding::new(
                    FindingCode::DanglingEdge,
                    locus.clone(),
                    format!("endpoint `{end}` is not a node"),
                ));
            }
        }
        if !seen.insert((a, b)) {
            out.push(Finding::new(FindingCode::DuplicateEdge, locus, "edge listed more than once"));
        }
    }
    if !m.is_connected() {
        out.push(Finding::new(
            FindingCode::DisconnectedGraph,
            Locus::Robot,
            "description graph is not connected",
        ));
    }
    if let Some(c) = &m.covering {
        if c.coverage != super::Coverage::FullyVisible && c.materials.is_empty() {
            out.push(Finding::new(
                FindingCode::CoveringWithoutMaterials,
                Locus::Covering,
                format!("{} covering must name at least one material", c.coverage),
            ));
        }
    }
    if let Some(s) = &m.silhouette {
        if let Some((a, b)) = &s.hybrid {
            if a == b {
                out.push(Finding::new(
                    FindingCode::HybridMismatch,
                    Locus::Silhouette,
                    "hybrid components must differ",
                ));
            }
        }
    }
    out
}

/// Checks a morphology against a taxonomy. Never fails; all findings go into the report.
pub fn validate(t: &Taxonomy, m: &RobotMorphology) -> ValidationReport {
    let mut report = ValidationReport {
        errors: structural_errors(m),
        lints: Vec::new(),
    };
    let adjacency = m.adjacency();

    for (i, n) in m.nodes.iter().enumerate() {
        let locus = Locus::Node(n.id.clone());
        let concept = match t.get(n.concept.as_str()) {
            Ok(c) => c,
            Err(_) => {
                report.errors.push(Finding::new(
                    FindingCode::UnknownConcept,
                    locus,
                    format!("concept `{}` is not in the taxonomy", n.concept),
                ));
                continue;
            }
        };
        if concept.kind != ConceptKind::Subdivision {
            report.errors.push(Finding::new(
                FindingCode::WrongKind,
                locus,
                format!("`{}` is a {}, not a subdivision", n.concept, concept.kind),
            ));
            continue;
        }
        for d in &n.descriptors {
            let name = d.descriptor.as_str();
            match t.get(name) {
                Err(_) => {
                    report.errors.push(Finding::new(
                        FindingCode::UnknownDescriptor,
                        locus.clone(),
                        format!("descriptor `{name}` is not in the taxonomy"),
                    ));
                    continue;
                }
                Ok(c) if c.kind != ConceptKind::Descriptor => {
                    report.errors.push(Finding::new(
                        FindingCode::WrongKind,
                        locus.clone(),
                        format!("`{name}` is a {}, not a descriptor", c.kind),
                    ));
                    continue;
                }
                Ok(_) => {}
            }
            if !t.descriptor_applies(name, n.concept.as_str()).unwrap_or(false) {
                report.errors.push(Finding::new(
                    FindingCode::DescriptorNotApplicable,
                    locus.clone(),
                    format!("descriptor `{name}` does not apply to `{}`", n.concept),
                ));
            }
            if !t.value_allowed(name, d.value.as_deref()) {
                report.errors.push(Finding::new(
                    FindingCode::InvalidDescriptorValue,
                    locus.clone(),
                    format!(
                        "value `{}` is outside the domain of `{name}`",
                        d.value.as_deref().unwrap_or("")
                    ),
                ));
            }
        }

        let degree = adjacency[i].len();
        let under = |root: &str| t.contains(root) && t.is_subsumed_by(n.concept.as_str(), root).unwrap_or(false);
        if under(vocab::TERMINAL) && degree != 1 {
            report.lints.push(Finding::new(
                FindingCode::TerminalDegree,
                Locus::Node(n.id.clone()),
                format!("terminal subdivision `{}` has degree {degree}, expected 1", n.concept),
            ));
        }
        if under(vocab::CONNECTING) && degree < 2 {
            report.lints.push(Finding::new(
                FindingCode::ConnectingDegree,
                Locus::Node(n.id.clone()),
                format!("connecting subdivision `{}` has degree {degree}, expected at least 2", n.concept),
            ));
        }
    }

    if !m.nodes.is_empty()
        && t.contains(vocab::CORE)
        && !m
            .nodes
            .iter()
            .any(|n| t.is_subsumed_by(n.concept.as_str(), vocab::CORE).unwrap_or(false))
    {
        report.lints.push(Finding::new(
            FindingCode::NoCoreNode,
            Locus::Robot,
            "no core subdivision present",
        ));
    }

    if let Some(s) = &m.silhouette {
        check_silhouette(t, s, &mut report);
    }
    if let Some(c) = &m.covering {
        if let Ok(known) = t.descendants(vocab::COVERING_MATERIAL) {
            for mat in &c.materials {
                let norm = crate::taxonomy::normalize_token(mat).to_lowercase();
                if !known.iter().any(|k| k.as_str().to_lowercase() == norm) {
                    report.lints.push(Finding::new(
                        FindingCode::UnknownMaterial,
                        Locus::Covering,
                        format!("material `{mat}` is not a known covering material"),
                    ));
                }
            }
        }
    }
    report
}

fn check_silhouette(t: &Taxonomy, s: &super::SilhouetteSpec, report: &mut ValidationReport) {
    let primary = s.primary.as_str();
    match t.get(primary) {
        Err(_) => {
            report.errors.push(Finding::new(
                FindingCode::UnknownConcept,
                Locus::Silhouette,
                format!("silhouette `{primary}` is not in the taxonomy"),
            ));
            return;
        }
        Ok(c) if c.kind != ConceptKind::Silhouette => {
            report.errors.push(Finding::new(
                FindingCode::WrongKind,
                Locus::Silhouette,
                format!("`{primary}` is a {}, not a silhouette", c.kind),
            ));
            return;
        }
        Ok(_) => {}
    }
    let is_hybrid = |id: &str| t.contains(vocab::HYBRID) && t.is_subsumed_by(id, vocab::HYBRID).unwrap_or(false);
    match (&s.hybrid, is_hybrid(primary)) {
        (None, true) => report.errors.push(Finding::new(
            FindingCode::HybridMismatch,
            Locus::Silhouette,
            format!("hybrid silhouette `{primary}` needs two components"),
        )),
        (Some(_), false) => report.errors.push(Finding::new(
            FindingCode::HybridMismatch,
            Locus::Silhouette,
            format!("`{primary}` is not a hybrid silhouette but lists components"),
        )),
        (Some((a, b)), true) => {
            for comp in [a, b] {
                if !t.contains(comp.as_str()) {
                    report.errors.push(Finding::new(
                        FindingCode::UnknownConcept,
                        Locus::Silhouette,
                        format!("hybrid component `{comp}` is not in the taxonomy"),
                    ));
                } else if is_hybrid(comp.as_str()) {
                    report.errors.push(Finding::new(
                        FindingCode::HybridMismatch,
                        Locus::Silhouette,
                        format!("hybrid component `{comp}` is itself a hybrid"),
                    ));
                }
            }
        }
        (None, false) => {}
    }
}
