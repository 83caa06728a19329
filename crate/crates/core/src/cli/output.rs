//! Rendering of command results in the selected output format.

use serde::Serialize;
use serde_json::json;

use crate::dataset::FrequencyStats;
use crate::distance::{CalibrationReport, DistanceMatrix, DistanceResult, EditOp, Metric, Neighbor, NodeLabel};
use crate::interchange;
use crate::morphology::ValidationReport;

use super::Format;

pub(crate) struct Out {
    format: Format,
    buf: String,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn csv_line(cells: &[String]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(cells).expect("write to Vec");
    String::from_utf8(w.into_inner().expect("flush Vec")).expect("UTF-8 in, UTF-8 out")
}

fn label_text(l: &NodeLabel) -> String {
    let mut s = l.concept.as_ref().map_or("*".to_string(), |c| c.as_str().to_string());
    if let Some(d) = l.descriptors.as_ref().filter(|d| !d.is_empty()) {
        s.push_str(&format!(" [{}]", d.join(", ")));
    }
    if let Some(k) = l.multiplicity {
        s.push_str(&format!(" x{k}"));
    }
    s
}

fn op_text(op: &EditOp) -> String {
    match op {
        EditOp::DeleteEdge { a, b } => format!("delete edge {a} -- {b}"),
        EditOp::DeleteNode { id } => format!("delete node {id}"),
        EditOp::SubstituteNode { from, to, label } => format!("substitute {from} -> {to} ({})", label_text(label)),
        EditOp::InsertNode { id, label } => format!("insert node {id} ({})", label_text(label)),
        EditOp::InsertEdge { a, b } => format!("insert edge {a} -- {b}"),
    }
}

impl Out {
    pub(crate) fn new(format: Format) -> Self {
        Out {
            format,
            buf: String::new(),
        }
    }

    pub(crate) fn as_bytes(&self) -> &[u8] {
        self.buf.as_bytes()
    }

    fn line(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    pub(crate) fn raw(&mut self, text: &str) {
        self.buf.push_str(text);
    }

    /// A non-JSON export; wrapped in an object under `--format json` so every
    /// subcommand's JSON output parses.
    pub(crate) fn document(&mut self, kind: &str, robot: &str, text: &str) {
        match self.format {
            Format::Json => self.raw(&to_json(&json!({"robot": robot, "format": kind, "content": text}))),
            Format::Text | Format::Csv => self.raw(text),
        }
    }

    pub(crate) fn validation(&mut self, file: &str, reports: &[(&str, ValidationReport)]) {
        match self.format {
            Format::Json => {
                let records: Vec<_> = reports
                    .iter()
                    .map(|(name, r)| {
                        let show = |fs: &[crate::morphology::Finding]| {
                            fs.iter()
                                .map(|f| json!({"code": f.code.to_string(), "locus": f.locus.to_string(), "message": f.message}))
                                .collect::<Vec<_>>()
                        };
                        json!({"record": name, "valid": r.is_valid(), "errors": show(&r.errors), "lints": show(&r.lints)})
                    })
                    .collect();
                self.raw(&to_json(&json!({"file": file, "records": records})));
            }
            Format::Csv => {
                self.raw(&csv_line(&["record", "severity", "code", "locus", "message"].map(String::from)));
                for (name, r) in reports {
                    for (sev, fs) in [("error", &r.errors), ("lint", &r.lints)] {
                        for f in fs {
                            self.raw(&csv_line(&[
                                name.to_string(),
                                sev.into(),
                                f.code.to_string(),
                                f.locus.to_string(),
                                f.message.clone(),
                            ]));
                        }
                    }
                }
            }
            Format::Text => {
                for (name, r) in reports {
                    let who = if name.is_empty() { file } else { name };
                    if r.is_valid() {
                        self.line(&format!("{who}: ok ({} lint(s))", r.lints.len()));
                    } else {
                        self.line(&format!("{who}: {} error(s)", r.errors.len()));
                    }
                    for f in &r.errors {
                        self.line(&format!("  error {f}"));
                    }
                    for f in &r.lints {
                        self.line(&format!("  lint {f}"));
                    }
                }
            }
        }
    }

    pub(crate) fn stats(&mut self, s: &FrequencyStats, min_z: Option<f64>) {
        let rows: Vec<_> = match min_z {
            Some(t) => s.with_z_at_least(t),
            None => s.features.iter().collect(),
        };
        let z = |z: Option<f64>| z.map_or(String::new(), |z| format!("{z:.4}"));
        match self.format {
            Format::Json => self.raw(&to_json(&json!({
                "robots": s.robots, "mean": s.mean, "sd": s.sd, "features": rows,
            }))),
            Format::Csv => {
                self.raw(&csv_line(&["feature", "count", "z"].map(String::from)));
                for f in rows {
                    self.raw(&csv_line(&[f.feature.clone(), f.count.to_string(), z(f.z)]));
                }
            }
            Format::Text => {
                self.line(&format!("robots {}  mean {:.4}  sd {:.4}", s.robots, s.mean, s.sd));
                for f in rows {
                    self.line(&format!("{:<40} {:>5} {:>9}", f.feature, f.count, z(f.z)));
                }
            }
        }
    }

    pub(crate) fn distance(&mut self, a: &str, b: &str, metric: Metric, r: &DistanceResult, index: Option<f64>, with_path: bool) {
        match self.format {
            Format::Json => {
                let mut v = json!({
                    "a": a, "b": b, "metric": metric.to_string(), "value": r.value, "exact": r.exact,
                    "budget_exceeded": r.budget_exceeded, "explored_states": r.explored_states,
                });
                if let Some(i) = index {
                    v["index"] = json!(i);
                }
                if with_path {
                    v["path"] = serde_json::to_value(&r.path).expect("path serializes");
                }
                self.raw(&to_json(&v));
            }
            Format::Csv => {
                self.raw(&csv_line(&["a", "b", "metric", "value", "exact"].map(String::from)));
                self.raw(&csv_line(&[a.into(), b.into(), metric.to_string(), r.value.to_string(), r.exact.to_string()]));
            }
            Format::Text => {
                match index {
                    Some(i) => self.line(&format!("{a} vs {b}: {metric} distance {} (index {i})", r.value)),
                    None => self.line(&format!(
                        "{a} vs {b}: {metric} {}{}",
                        r.value,
                        if r.exact { "" } else { " (upper bound)" }
                    )),
                }
                if r.budget_exceeded {
                    self.line(&format!("budget exceeded after {} states; value is an upper bound", r.explored_states));
                }
                if let (true, Some(p)) = (with_path, &r.path) {
                    for s in &p.steps {
                        self.line(&format!("  {:<60} {}", op_text(&s.op), s.cost));
                    }
                    self.line(&format!("  total {}", p.total_cost));
                }
            }
        }
    }

    pub(crate) fn matrix(&mut self, m: &DistanceMatrix) {
        match self.format {
            Format::Json => self.raw(&interchange::matrix_to_json(m)),
            Format::Csv => self.raw(&interchange::matrix_to_csv(m)),
            Format::Text => {
                let width = m.names.iter().map(|n| n.chars().count()).max().unwrap_or(0).max(6);
                let mut head = format!("{:width$}", "");
                for n in &m.names {
                    head.push_str(&format!(" {n:>width$}"));
                }
                self.line(head.trim_end());
                for (i, n) in m.names.iter().enumerate() {
                    let mut row = format!("{n:width$}");
                    for j in 0..m.names.len() {
                        let mark = if m.exact[i][j] { "" } else { "*" };
                        row.push_str(&format!(" {:>width$}", format!("{}{mark}", m.values[i][j])));
                    }
                    self.line(&row);
                }
                if m.any_inexact() {
                    self.line("* upper bound (exact search budget exceeded or cell failed)");
                }
            }
        }
    }

    pub(crate) fn neighbors(&mut self, list: &[Neighbor]) {
        match self.format {
            Format::Json => self.raw(&to_json(&list)),
            Format::Csv => {
                self.raw(&csv_line(&["rank", "name", "distance", "exact"].map(String::from)));
                for (i, n) in list.iter().enumerate() {
                    self.raw(&csv_line(&[(i + 1).to_string(), n.name.clone(), n.distance.to_string(), n.exact.to_string()]));
                }
            }
            Format::Text => {
                for (i, n) in list.iter().enumerate() {
                    let mark = if n.exact { "" } else { " (upper bound)" };
                    self.line(&format!("{:>3}. {} {}{mark}", i + 1, n.name, n.distance));
                }
            }
        }
    }

    pub(crate) fn names<'a>(&mut self, names: impl Iterator<Item = &'a str>) {
        let names: Vec<&str> = names.collect();
        match self.format {
            Format::Json => self.raw(&to_json(&names)),
            Format::Csv => {
                self.raw(&csv_line(&["name".to_string()]));
                for n in names {
                    self.raw(&csv_line(&[n.to_string()]));
                }
            }
            Format::Text => {
                for n in names {
                    self.line(n);
                }
            }
        }
    }

    pub(crate) fn calibration(&mut self, r: &CalibrationReport) {
        match self.format {
            Format::Json => self.raw(&to_json(r)),
            Format::Csv => {
                let mut head = vec!["metric".to_string(), "configuration".to_string()];
                head.extend(r.pairs.iter().cloned());
                head.push("matches".into());
                self.raw(&csv_line(&head));
                for row in &r.rows {
                    let mut cells = vec![row.metric.clone(), row.configuration.clone()];
                    cells.extend(row.values.iter().map(f64::to_string));
                    cells.push(row.matches.to_string());
                    self.raw(&csv_line(&cells));
                }
            }
            Format::Text => {
                self.raw(&r.to_text());
                let show = |w: &Option<String>| w.clone().unwrap_or_else(|| "none (see discrepancies above)".into());
                self.line(&format!("ged configuration: {}", show(&r.ged_winner)));
                self.line(&format!("jaccard configuration: {}", show(&r.jaccard_winner)));
            }
        }
    }
}
