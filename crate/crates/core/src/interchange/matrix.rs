use serde::Serialize;

use crate::distance::DistanceMatrix;

fn table<T>(m: &DistanceMatrix, cells: &[Vec<T>], show: impl Fn(&T) -> String) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = std::iter::once("").chain(m.names.iter().map(String::as_str)).collect();
    w.write_record(&header).expect("write to Vec");
    for (name, row) in m.names.iter().zip(cells) {
        let record: Vec<String> = std::iter::once(name.clone()).chain(row.iter().map(&show)).collect();
        w.write_record(&record).expect("write to Vec");
    }
    String::from_utf8(w.into_inner().expect("flush Vec")).expect("CSV of UTF-8 input is UTF-8")
}

/// Distances with a header row and column of robot names; failed cells are `NaN`.
pub fn matrix_to_csv(m: &DistanceMatrix) -> String {
    table(m, &m.values, |v| v.to_string())
}

/// Same layout as [`matrix_to_csv`], holding `true` where the cell is exact.
pub fn exactness_to_csv(m: &DistanceMatrix) -> String {
    table(m, &m.exact, |e| e.to_string())
}

#[derive(Serialize)]
struct Cell<'a> {
    row: &'a str,
    column: &'a str,
    value: Option<f64>,
    exact: bool,
}

#[derive(Serialize)]
struct MatrixJson<'a> {
    names: &'a [String],
    cells: Vec<Cell<'a>>,
    diagnostics: &'a [crate::distance::CellDiagnostic],
}

/// Row-major cells with per-cell metadata. NaN is written as `null`.
pub fn matrix_to_json(m: &DistanceMatrix) -> String {
    let mut cells = Vec::new();
    for (i, row) in m.names.iter().enumerate() {
        for (j, column) in m.names.iter().enumerate() {
            let v = m.values[i][j];
            cells.push(Cell {
                row,
                column,
                value: (!v.is_nan()).then_some(v),
                exact: m.exact[i][j],
            });
        }
    }
    let mut s = serde_json::to_string_pretty(&MatrixJson {
        names: &m.names,
        cells,
        diagnostics: &m.diagnostics,
    })
    .expect("matrix serializes");
    s.push('\n');
    s
}
