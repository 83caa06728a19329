use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::morphology::{MorphologyError, RobotMorphology};

use super::InterchangeError;

fn attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

// `--` may not appear inside an XML comment.
fn comment_safe(s: &str) -> String {
    let mut out = s.replace("--", "-\u{2010}");
    while out.contains("--") {
        out = out.replace("--", "-\u{2010}");
    }
    if out.ends_with('-') {
        out.push(' ');
    }
    out
}

/// Emits one `<link>` element with a `<metamorph>` child per mapped node.
///
/// `link_map` maps node ids to URDF link names. Links appear in link-name
/// order; unmapped nodes are listed in a trailing comment.
pub fn to_urdf_annotation(m: &RobotMorphology, link_map: &BTreeMap<String, String>) -> Result<String, InterchangeError> {
    let structural = crate::morphology::structural_errors(m);
    if !structural.is_empty() {
        return Err(MorphologyError::InvalidMorphology(structural).into());
    }
    let mut by_link: BTreeMap<&str, &str> = BTreeMap::new();
    for (node, link) in link_map {
        if m.node(node).is_none() {
            return Err(InterchangeError::UnknownNode(node.clone()));
        }
        if by_link.insert(link.as_str(), node.as_str()).is_some() {
            return Err(InterchangeError::DuplicateLink(link.clone()));
        }
    }

    let mut out = String::from("<metamorph_annotation>\n");
    for (link, node_id) in &by_link {
        let n = m.node(node_id).expect("checked above");
        writeln!(out, "  <link name=\"{}\">", attr(link)).expect("write to String");
        out.push_str("    <metamorph>\n");
        write!(
            out,
            "      <concept id=\"{}\" node=\"{}\" multiplicity=\"{}\"",
            attr(n.concept.as_str()),
            attr(&n.id),
            n.multiplicity
        )
        .expect("write to String");
        if n.descriptors.is_empty() {
            out.push_str("/>\n");
        } else {
            out.push_str(">\n");
            for d in &n.descriptors {
                write!(out, "        <descriptor name=\"{}\"", attr(d.descriptor.as_str())).expect("write to String");
                if let Some(v) = &d.value {
                    write!(out, " value=\"{}\"", attr(v)).expect("write to String");
                }
                out.push_str("/>\n");
            }
            out.push_str("      </concept>\n");
        }
        out.push_str("    </metamorph>\n  </link>\n");
    }

    let unmapped: BTreeSet<&str> = m
        .nodes
        .iter()
        .map(|n| n.id.as_str())
        .filter(|id| !link_map.contains_key(*id))
        .collect();
    if !unmapped.is_empty() {
        out.push_str("  <!-- unmapped nodes:\n");
        for id in unmapped {
            let n = m.node(id).expect("node exists");
            writeln!(out, "       {} ({})", comment_safe(id), comment_safe(n.concept.as_str())).expect("write to String");
        }
        out.push_str("  -->\n");
    }
    out.push_str("</metamorph_annotation>\n");
    Ok(out)
}
