use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::Dataset;
use crate::morphology::RobotMorphology;

use super::{distance, Budget, CostModel, DistanceError, Metric};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellDiagnostic {
    pub row: usize,
    pub column: usize,
    pub message: String,
}

/// Square matrix over dataset records. Failed cells hold NaN and have a
/// diagnostic; cells past the exact-search budget are marked inexact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub exact: Vec<Vec<bool>>,
    pub diagnostics: Vec<CellDiagnostic>,
}

impl DistanceMatrix {
    pub fn any_inexact(&self) -> bool {
        self.exact.iter().flatten().any(|e| !e)
    }
}

/// Cells are computed in parallel; the result equals a sequential run.
/// With a symmetric cost model only the upper triangle is computed.
pub fn distance_matrix(d: &Dataset, metric: Metric, c: &CostModel, budget: Budget) -> Result<DistanceMatrix, DistanceError> {
    if d.is_empty() {
        return Err(DistanceError::EmptyDataset);
    }
    if !matches!(metric, Metric::Jaccard(_)) {
        c.check(false)?;
    }
    let n = d.len();
    let symmetric = matches!(metric, Metric::Jaccard(_)) || c.is_symmetric();
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| if symmetric { i < j } else { i != j })
        .collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(i, j)| distance(&d.records[i].morphology, &d.records[j].morphology, metric, c, budget))
        .collect();

    let mut values = vec![vec![0.0; n]; n];
    let mut exact = vec![vec![true; n]; n];
    let mut diagnostics = Vec::new();
    for (&(i, j), r) in cells.iter().zip(results) {
        let (v, e) = match r {
            Ok(r) => (r.value, r.exact),
            Err(err) => {
                diagnostics.push(CellDiagnostic {
                    row: i,
                    column: j,
                    message: format!("{} vs {}: {err}", d.records[i].name, d.records[j].name),
                });
                (f64::NAN, false)
            }
        };
        values[i][j] = v;
        exact[i][j] = e;
        if symmetric {
            values[j][i] = v;
            exact[j][i] = e;
        }
    }
    Ok(DistanceMatrix {
        names: d.records.iter().map(|r| r.name.clone()).collect(),
        values,
        exact,
        diagnostics,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Neighbor {
    pub name: String,
    pub distance: f64,
    pub exact: bool,
}

/// The `k` records closest to `probe`, nearest first; ties go to the
/// lexicographically smaller name.
pub fn nearest_neighbors(
    d: &Dataset,
    probe: &RobotMorphology,
    k: usize,
    metric: Metric,
    c: &CostModel,
    budget: Budget,
) -> Result<Vec<Neighbor>, DistanceError> {
    if d.is_empty() {
        return Err(DistanceError::EmptyDataset);
    }
    if k == 0 {
        return Err(DistanceError::InvalidK);
    }
    if k > d.len() {
        return Err(DistanceError::KTooLarge { k, size: d.len() });
    }
    let mut all = d
        .records
        .par_iter()
        .map(|r| {
            distance(probe, &r.morphology, metric, c, budget).map(|x| Neighbor {
                name: r.name.clone(),
                distance: x.value,
                exact: x.exact,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    all.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| a.name.cmp(&b.name)));
    all.truncate(k);
    Ok(all)
}
