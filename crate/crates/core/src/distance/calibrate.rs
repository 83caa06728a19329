//! Sweeps label modes, graph forms and feature profiles against reference
//! distances to pick the configuration that reproduces them.

use std::sync::Arc;

use serde::Serialize;

use crate::morphology::{FeatureProfile, RobotMorphology};
use crate::taxonomy::Taxonomy;

use super::{distance, Budget, CostModel, GraphForm, LabelEquality, Metric};

pub struct CalibrationPair<'a> {
    pub label: String,
    pub a: &'a RobotMorphology,
    pub b: &'a RobotMorphology,
    pub expected_ged: f64,
    pub expected_jaccard: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationRow {
    /// `ged` or `jaccard`.
    pub metric: String,
    pub configuration: String,
    /// One value per pair, NaN where the computation failed.
    pub values: Vec<f64>,
    pub exact: Vec<bool>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub pairs: Vec<String>,
    pub expected_ged: Vec<f64>,
    pub expected_jaccard: Vec<f64>,
    pub rows: Vec<CalibrationRow>,
    /// First matching configuration, in row order.
    pub ged_winner: Option<String>,
    pub jaccard_winner: Option<String>,
}

const GED_MODES: [LabelEquality; 3] = [
    LabelEquality::ConceptOnly,
    LabelEquality::ConceptDescriptors,
    LabelEquality::StructureOnly,
];

/// GED rows must match exactly; Jaccard rows within `jaccard_tolerance`.
/// Expanded forms are only tried when a taxonomy is supplied.
pub fn calibrate(
    pairs: &[CalibrationPair<'_>],
    taxonomy: Option<Arc<Taxonomy>>,
    budget: Budget,
    jaccard_tolerance: f64,
) -> CalibrationReport {
    let mut rows = Vec::new();
    let forms: &[GraphForm] = if taxonomy.is_some() {
        &[GraphForm::Compressed, GraphForm::Expanded]
    } else {
        &[GraphForm::Compressed]
    };
    for &form in forms {
        for mode in GED_MODES {
            let mut c = CostModel::default().with_labels(mode).with_form(form);
            c.taxonomy = taxonomy.clone();
            let mut values = Vec::new();
            let mut exact = Vec::new();
            for p in pairs {
                match distance(p.a, p.b, Metric::GedExact, &c, budget) {
                    Ok(r) => {
                        values.push(r.value);
                        exact.push(r.exact);
                    }
                    Err(_) => {
                        values.push(f64::NAN);
                        exact.push(false);
                    }
                }
            }
            let matches = values
                .iter()
                .zip(pairs)
                .all(|(v, p)| (v - p.expected_ged).abs() < 1e-9);
            rows.push(CalibrationRow {
                metric: "ged".into(),
                configuration: format!("{mode}/{form}"),
                values,
                exact,
                matches,
            });
        }
    }
    for profile in [FeatureProfile::ConceptsOnly, FeatureProfile::Full] {
        let c = CostModel::default();
        let values: Vec<f64> = pairs
            .iter()
            .map(|p| {
                distance(p.a, p.b, Metric::Jaccard(profile), &c, budget).map_or(f64::NAN, |r| 1.0 - r.value)
            })
            .collect();
        let matches = values
            .iter()
            .zip(pairs)
            .all(|(v, p)| (v - p.expected_jaccard).abs() <= jaccard_tolerance);
        rows.push(CalibrationRow {
            metric: "jaccard".into(),
            configuration: match profile {
                FeatureProfile::ConceptsOnly => "concepts".into(),
                FeatureProfile::Full => "full".into(),
            },
            exact: vec![true; values.len()],
            values,
            matches,
        });
    }
    let winner = |metric: &str| {
        rows.iter()
            .find(|r| r.metric == metric && r.matches)
            .map(|r| r.configuration.clone())
    };
    CalibrationReport {
        pairs: pairs.iter().map(|p| p.label.clone()).collect(),
        expected_ged: pairs.iter().map(|p| p.expected_ged).collect(),
        expected_jaccard: pairs.iter().map(|p| p.expected_jaccard).collect(),
        ged_winner: winner("ged"),
        jaccard_winner: winner("jaccard"),
        rows,
    }
}

impl CalibrationReport {
    /// Plain-text table, one row per configuration.
    pub fn to_text(&self) -> String {
        let mut out = format!("{:<8} {:<36} {}\n", "metric", "configuration", self.pairs.join(" | "));
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" | ");
        out.push_str(&format!("{:<8} {:<36} {}\n", "ged", "expected", fmt(&self.expected_ged)));
        out.push_str(&format!("{:<8} {:<36} {}\n", "jaccard", "expected", fmt(&self.expected_jaccard)));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<8} {:<36} {}{}\n",
                r.metric,
                r.configuration,
                fmt(&r.values),
                if r.matches { "  <- match" } else { "" }
            ));
        }
        out
    }
}
