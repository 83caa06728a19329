use std::fmt::Write;

use crate::morphology::{canonicalize, RobotMorphology};

use super::InterchangeError;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the canonical form as an undirected DOT graph.
///
/// Labels hold the concept, then descriptor tokens, then `×k` for
/// multiplicities above one, separated by DOT line breaks.
pub fn to_dot(m: &RobotMorphology) -> Result<String, InterchangeError> {
    let c = canonicalize(m)?;
    let mut out = String::from("graph {\n");
    for n in &c.nodes {
        let mut lines = vec![escape(n.concept.as_str())];
        let tokens = n.descriptor_tokens();
        if !tokens.is_empty() {
            lines.push(escape(&tokens.join(", ")));
        }
        if n.multiplicity > 1 {
            lines.push(format!("×{}", n.multiplicity));
        }
        writeln!(out, "  {} [label=\"{}\"];", n.id, lines.join("\\n")).expect("write to String");
    }
    for e in &c.edges {
        let (a, b) = e.endpoints();
        writeln!(out, "  {a} -- {b};").expect("write to String");
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphology::MorphNode;
    use crate::taxonomy::ConceptId;

    #[test]
    fn empty_graph() {
        assert_eq!(to_dot(&RobotMorphology::new()).unwrap(), "graph {\n}\n");
    }

    #[test]
    fn single_node() {
        let mut m = RobotMorphology::new();
        m.add_node(MorphNode::new("body", ConceptId::new("Body").unwrap()));
        assert_eq!(to_dot(&m).unwrap(), "graph {\n  n0 [label=\"Body\"];\n}\n");
    }

    #[test]
    fn labels_carry_descriptors_and_multiplicity() {
        let mut m = RobotMorphology::new();
        m.add_node(MorphNode::new("body", ConceptId::new("Body").unwrap()))
            .add_node(
                MorphNode::new("eye", ConceptId::new("Eye").unwrap())
                    .with_multiplicity(2)
                    .with_descriptor(ConceptId::new("Shape").unwrap(), Some("Sphere")),
            )
            .add_edge("body", "eye");
        let dot = to_dot(&m).unwrap();
        assert!(dot.contains("[label=\"Eye\\nShape=Sphere\\n×2\"]"), "{dot}");
        assert!(dot.contains("n0 -- n1;"));
    }
}
