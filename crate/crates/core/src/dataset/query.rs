//! Feature-presence predicates.
//!
//! ```text
//! expr := term (("or" | "||" | "∨") term)*
//! term := factor (("and" | "&&" | "∧") factor)*
//! factor := ("not" | "!" | "¬") factor | "(" expr ")" | "true" | "false" | "has(" token ")"
//! ```
//!
//! The empty predicate is `true`. Tokens are feature-set tokens of the full
//! profile, e.g. `Wheel`, `desc:Shape=Sphere`, `covering:FullyCovered`.

use std::collections::BTreeSet;

use crate::morphology::{feature_set, FeatureProfile};
use crate::taxonomy::Taxonomy;

use super::{Dataset, DatasetError, RobotRecord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    True,
    False,
    Has(String),
    Not(Box<Predicate>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
}

impl Predicate {
    pub fn parse(text: &str) -> Result<Predicate, DatasetError> {
        let mut p = Parser { src: text, pos: 0 };
        p.skip_ws();
        if p.pos == text.len() {
            return Ok(Predicate::True);
        }
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    fn features(&self, out: &mut Vec<String>) {
        match self {
            Predicate::True | Predicate::False => {}
            Predicate::Has(f) => out.push(f.clone()),
            Predicate::Not(p) => p.features(out),
            Predicate::And(a, b) | Predicate::Or(a, b) => {
                a.features(out);
                b.features(out);
            }
        }
    }

    fn eval(&self, has: &dyn Fn(&str) -> bool) -> bool {
        match self {
            Predicate::True => true,
            Predicate::False => false,
            Predicate::Has(f) => has(f),
            Predicate::Not(p) => !p.eval(has),
            Predicate::And(a, b) => a.eval(has) && b.eval(has),
            Predicate::Or(a, b) => a.eval(has) || b.eval(has),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> DatasetError {
        DatasetError::PredicateParse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    // Word operators must not run into an identifier.
    fn eat(&mut self, options: &[&str]) -> bool {
        self.skip_ws();
        for op in options {
            if let Some(after) = self.rest().strip_prefix(op) {
                let wordy = op.chars().all(|c| c.is_ascii_alphabetic());
                if wordy && after.starts_with(|c: char| c.is_alphanumeric() || c == '_' || c == '(') {
                    continue;
                }
                self.pos += op.len();
                return true;
            }
        }
        false
    }

    fn expr(&mut self) -> Result<Predicate, DatasetError> {
        let mut left = self.term()?;
        while self.eat(&["or", "||", "∨"]) {
            left = Predicate::Or(Box::new(left), Box::new(self.term()?));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Predicate, DatasetError> {
        let mut left = self.factor()?;
        while self.eat(&["and", "&&", "∧"]) {
            left = Predicate::And(Box::new(left), Box::new(self.factor()?));
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Predicate, DatasetError> {
        if self.eat(&["not", "!", "¬"]) {
            return Ok(Predicate::Not(Box::new(self.factor()?)));
        }
        if self.eat(&["("]) {
            let e = self.expr()?;
            if !self.eat(&[")"]) {
                return Err(self.error("expected `)`"));
            }
            return Ok(e);
        }
        if self.eat(&["true"]) {
            return Ok(Predicate::True);
        }
        if self.eat(&["false"]) {
            return Ok(Predicate::False);
        }
        self.skip_ws();
        if let Some(after) = self.rest().strip_prefix("has(") {
            let close = after.find(')').ok_or_else(|| self.error("unterminated has("))?;
            let token = after[..close].trim();
            if token.is_empty() {
                return Err(self.error("has() needs a feature"));
            }
            let token = token.to_string();
            self.pos += "has(".len() + close + 1;
            return Ok(Predicate::Has(token));
        }
        Err(self.error("expected has(...), not, true, false or `(`"))
    }
}

/// Records satisfying `predicate`, in dataset order.
///
/// With a taxonomy, `has(X)` also matches robots with a node concept
/// subsumed by `X`, and any taxonomy concept counts as a known feature.
pub fn query<'d>(d: &'d Dataset, predicate: &str, t: Option<&Taxonomy>) -> Result<Vec<&'d RobotRecord>, DatasetError> {
    let p = Predicate::parse(predicate)?;
    let sets: Vec<BTreeSet<String>> = d
        .records
        .iter()
        .map(|r| feature_set(&r.morphology, FeatureProfile::Full).expect("validated morphology"))
        .collect();
    let mut wanted = Vec::new();
    p.features(&mut wanted);
    for f in &wanted {
        let known = sets.iter().any(|s| s.contains(f)) || t.is_some_and(|t| t.contains(f));
        if !known {
            return Err(DatasetError::UnknownFeature(f.clone()));
        }
    }
    Ok(d.records
        .iter()
        .zip(&sets)
        .filter(|(r, set)| {
            let has = |f: &str| {
                set.contains(f)
                    || t.is_some_and(|t| {
                        t.contains(f)
                            && r.morphology
                                .nodes
                                .iter()
                                .any(|n| t.is_subsumed_by(n.concept.as_str(), f).unwrap_or(false))
                    })
            };
            p.eval(&has)
        })
        .map(|(r, _)| r)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::tests::{robot, taxonomy};
    use crate::dataset::Split;

    fn fixture() -> Dataset {
        Dataset::new(
            vec![
                robot("rover", Split::Template, &[("b", "Base"), ("w", "Wheel")], &[("b", "w")]),
                robot("walker", Split::Template, &[("b", "Body"), ("l", "Leg")], &[("b", "l")]),
                robot("hybrid", Split::Validation, &[("b", "Body"), ("l", "Leg"), ("w", "Wheel")], &[("b", "l"), ("l", "w")]),
                robot("arm", Split::Validation, &[("b", "Base"), ("a", "Arm"), ("g", "Gripper")], &[("b", "a"), ("a", "g")]),
            ],
            "",
            &taxonomy(),
        )
        .unwrap()
    }

    fn names(v: Vec<&RobotRecord>) -> Vec<&str> {
        v.into_iter().map(|r| r.name.as_str()).collect()
    }

    #[test]
    fn wheeled_and_legless_matches_linear_scan() {
        let d = fixture();
        let got = names(query(&d, "has(Wheel) and not has(Leg)", None).unwrap());
        let oracle: Vec<&str> = d
            .records
            .iter()
            .filter(|r| {
                let c: Vec<&str> = r.morphology.nodes.iter().map(|n| n.concept.as_str()).collect();
                c.contains(&"Wheel") && !c.contains(&"Leg")
            })
            .map(|r| r.name.as_str())
            .collect();
        assert_eq!(got, oracle);
        assert_eq!(got, vec!["rover"]);
        assert_eq!(names(query(&d, "has(Wheel) ∧ ¬has(Leg)", None).unwrap()), vec!["rover"]);
    }

    #[test]
    fn empty_and_true_select_everything() {
        let d = fixture();
        assert_eq!(query(&d, "", None).unwrap().len(), 4);
        assert_eq!(query(&d, "  true ", None).unwrap().len(), 4);
    }

    #[test]
    fn unknown_feature() {
        assert_eq!(
            query(&fixture(), "has(nonexistent)", None),
            Err(DatasetError::UnknownFeature("nonexistent".into()))
        );
    }

    #[test]
    fn precedence_and_grouping() {
        let d = fixture();
        // and binds tighter than or
        assert_eq!(names(query(&d, "has(Arm) or has(Leg) and has(Wheel)", None).unwrap()), vec!["hybrid", "arm"]);
        assert_eq!(names(query(&d, "(has(Arm) or has(Leg)) and has(Base)", None).unwrap()), vec!["arm"]);
    }

    #[test]
    fn subsumption_with_taxonomy() {
        let d = fixture();
        let t = taxonomy();
        assert_eq!(names(query(&d, "has(Limb)", Some(&t)).unwrap()), vec!["walker", "hybrid", "arm"]);
        assert_eq!(
            query(&d, "has(Limb)", None),
            Err(DatasetError::UnknownFeature("Limb".into()))
        );
    }

    #[test]
    fn parse_errors_have_offsets() {
        match Predicate::parse("has(Wheel) and") {
            Err(DatasetError::PredicateParse { offset, .. }) => assert_eq!(offset, 14),
            other => panic!("{other:?}"),
        }
        assert!(Predicate::parse("has(Wheel").is_err());
        assert!(Predicate::parse("has(Wheel) has(Leg)").is_err());
    }
}
