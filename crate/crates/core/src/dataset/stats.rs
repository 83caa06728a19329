use std::collections::BTreeMap;

use serde::Serialize;

use crate::morphology::{feature_set, FeatureProfile};

use super::{Dataset, DatasetError, Split};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureCount {
    pub feature: String,
    /// Robots in which the feature occurs at least once.
    pub count: usize,
    /// `None` when the standard deviation is zero.
    pub z: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyStats {
    pub robots: usize,
    /// Descending count, then feature id.
    pub features: Vec<FeatureCount>,
    pub mean: f64,
    /// Population standard deviation of the count vector.
    pub sd: f64,
}

impl FrequencyStats {
    pub fn get(&self, feature: &str) -> Option<&FeatureCount> {
        self.features.iter().find(|f| f.feature == feature)
    }

    pub fn with_z_at_least(&self, threshold: f64) -> Vec<&FeatureCount> {
        self.features
            .iter()
            .filter(|f| f.z.is_some_and(|z| z >= threshold))
            .collect()
    }
}

pub fn frequency_stats(
    d: &Dataset,
    split: Option<Split>,
    profile: FeatureProfile,
) -> Result<FrequencyStats, DatasetError> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut robots = 0;
    for r in d.select(split) {
        robots += 1;
        // ingest validated every record, so this cannot fail
        let features = feature_set(&r.morphology, profile).expect("validated morphology");
        for f in features {
            *counts.entry(f).or_default() += 1;
        }
    }
    if robots == 0 || counts.is_empty() {
        return Err(DatasetError::EmptySelection);
    }
    let n = counts.len() as f64;
    let mean = counts.values().map(|&c| c as f64).sum::<f64>() / n;
    let var = counts.values().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    let mut features: Vec<FeatureCount> = counts
        .into_iter()
        .map(|(feature, count)| FeatureCount {
            feature,
            count,
            z: (sd > 0.0).then(|| (count as f64 - mean) / sd),
        })
        .collect();
    features.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.feature.cmp(&b.feature)));
    Ok(FrequencyStats {
        robots,
        features,
        mean,
        sd,
    })
}
