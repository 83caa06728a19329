//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation errors, 2 parse, I/O or usage errors,
//! 3 exact search exceeded its budget (the approximate result is still printed).

mod output;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataset::{self, frequency_stats, Dataset, DatasetFormat, RobotRecord, Split};
use crate::distance::{
    self, calibrate, distance_matrix, nearest_neighbors, Budget, CalibrationPair, CostModel, GraphForm, LabelEquality,
    Metric, SubstitutionCost,
};
use crate::interchange;
use crate::morphology::{feature_set, validate, FeatureProfile};
use crate::taxonomy::{self, load_taxonomy, RulesSidecar, Taxonomy, TaxonomyFormat};

use output::Out;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "metamorph", version, about = "Robot morphology descriptions: validation, statistics and visual distances")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SubstitutionArg {
    Unit,
    Taxonomy,
}

#[derive(Debug, Args)]
struct Global {
    /// Taxonomy file (`.taxonomy.json` or `.ttl`); defaults to the bundled one.
    #[arg(long, global = true, env = "METAMORPH_TAXONOMY")]
    taxonomy: Option<PathBuf>,
    /// Rules sidecar JSON (applicability rules and kind roots).
    #[arg(long, global = true)]
    rules: Option<PathBuf>,
    /// Dataset file (`.dataset.json` or `.csv`).
    #[arg(long, global = true, env = "METAMORPH_DATASET")]
    dataset: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// More diagnostics on standard error (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    /// Label attributes compared by edit distance.
    #[arg(long, global = true, default_value = "concept", value_parser = parse_labels)]
    labels: LabelEquality,
    /// Compare compressed graphs or expand branch multiplicities first.
    #[arg(long, global = true, default_value = "compressed", value_parser = parse_form)]
    form: GraphForm,
    #[arg(long, global = true, value_enum, default_value_t = SubstitutionArg::Unit)]
    substitution: SubstitutionArg,
    /// Per-token penalty for taxonomy-weighted substitution.
    #[arg(long, global = true, default_value_t = 0.5)]
    descriptor_penalty: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    node_insert: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    node_delete: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    edge_insert: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    edge_delete: f64,
    /// Largest graph (in nodes) searched exactly.
    #[arg(long, global = true, default_value_t = Budget::default().max_nodes)]
    max_nodes: usize,
    /// Largest number of search states generated before falling back.
    #[arg(long, global = true, default_value_t = Budget::default().max_states, value_parser = clap::value_parser!(u64).range(1..))]
    max_states: u64,
}

fn parse_labels(s: &str) -> Result<LabelEquality, String> {
    s.parse()
}

fn parse_form(s: &str) -> Result<GraphForm, String> {
    s.parse()
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse()
}

fn parse_split(s: &str) -> Result<Split, String> {
    s.parse()
}

fn parse_profile(s: &str) -> Result<FeatureProfile, String> {
    s.parse()
}

#[derive(Debug, Args)]
struct MetricArgs {
    /// jaccard, jaccard-full, ged or ged-approx.
    #[arg(long, default_value = "ged", value_parser = parse_metric)]
    metric: Metric,
    /// Exact edit distance (falls back past the budget).
    #[arg(long, conflicts_with = "approx")]
    exact: bool,
    /// Assignment-based upper bound instead of exact search.
    #[arg(long)]
    approx: bool,
}

impl MetricArgs {
    fn metric(&self) -> Metric {
        match self.metric {
            Metric::GedExact | Metric::GedUpperBound if self.approx => Metric::GedUpperBound,
            Metric::GedExact | Metric::GedUpperBound if self.exact => Metric::GedExact,
            m => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportKind {
    Dot,
    Urdf,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a robot or dataset file against the taxonomy.
    Validate { file: PathBuf },
    /// Feature frequency statistics over the dataset.
    Stats {
        #[arg(long, value_parser = parse_split)]
        split: Option<Split>,
        /// concepts or full.
        #[arg(long, default_value = "concepts", value_parser = parse_profile)]
        profile: FeatureProfile,
        /// Only list features whose z-score reaches this value.
        #[arg(long)]
        min_z: Option<f64>,
    },
    /// Distance between two robots (files, or record names in the dataset).
    Distance {
        a: String,
        b: String,
        #[command(flatten)]
        metric: MetricArgs,
        /// Include the edit path.
        #[arg(long)]
        path: bool,
    },
    /// Pairwise distance matrix over the dataset.
    Matrix {
        #[command(flatten)]
        metric: MetricArgs,
        /// Also write the per-cell exactness table (CSV) here.
        #[arg(long)]
        exact_out: Option<PathBuf>,
    },
    /// The k dataset records nearest to a probe robot.
    Knn {
        probe: String,
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[command(flatten)]
        metric: MetricArgs,
    },
    /// Dataset records matching a feature predicate, e.g. `has(Wheel) and not has(Leg)`.
    Query {
        predicate: String,
        /// Let `has(X)` match concepts subsumed by X.
        #[arg(long)]
        subsume: bool,
    },
    /// Export a robot as DOT, URDF annotation or canonical JSON.
    Export {
        #[arg(value_enum)]
        kind: ExportKind,
        robot: String,
        /// URDF link mapping `node=link` (repeatable).
        #[arg(long = "link", value_parser = parse_link)]
        links: Vec<(String, String)>,
    },
    /// Compare every calibration configuration against reference distances
    /// for the pairs (A,B), (A,C), (B,C).
    Calibrate {
        a: String,
        b: String,
        c: String,
        /// Reference edit distances, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        ged: Vec<f64>,
        /// Reference Jaccard indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        jaccard: Vec<f64>,
        #[arg(long, default_value_t = 0.005)]
        tolerance: f64,
    },
}

fn parse_link(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((n, l)) if !n.is_empty() && !l.is_empty() => Ok((n.to_string(), l.to_string())),
        _ => Err(format!("expected node=link, got `{s}`")),
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub(crate) struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

type CliResult = Result<i32, Failure>;

struct Context<'a> {
    global: &'a Global,
    taxonomy: Option<Arc<Taxonomy>>,
    dataset: Option<Dataset>,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_INPUT
                }
            };
        }
    };
    let mut ctx = Context {
        global: &cli.global,
        taxonomy: None,
        dataset: None,
    };
    let mut out = Out::new(cli.global.format);
    let result = execute(&cli.command, &mut ctx, &mut out, stderr);
    let _ = stdout.write_all(out.as_bytes());
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

impl Context<'_> {
    fn taxonomy(&mut self, stderr: &mut dyn Write) -> Result<Arc<Taxonomy>, Failure> {
        if let Some(t) = &self.taxonomy {
            return Ok(t.clone());
        }
        let sidecar = match &self.global.rules {
            Some(p) => Some(
                RulesSidecar::from_json(&read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
            ),
            None => None,
        };
        let t = match &self.global.taxonomy {
            Some(p) => {
                let text = read(p)?;
                let loaded = match TaxonomyFormat::from_path(p) {
                    TaxonomyFormat::TurtleSubset => taxonomy::turtle::load(&text, sidecar.as_ref()),
                    TaxonomyFormat::CanonicalJson => {
                        let t = load_taxonomy(&text, TaxonomyFormat::CanonicalJson);
                        match (t, sidecar) {
                            (Ok(t), Some(s)) => t.with_rules(s.rules),
                            (t, _) => t,
                        }
                    }
                };
                let t = loaded.map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
                if self.global.verbose > 0 {
                    let _ = writeln!(
                        stderr,
                        "taxonomy {} ({} concepts, {} skipped statements)",
                        p.display(),
                        t.len(),
                        t.skipped_statements()
                    );
                }
                t
            }
            None => {
                if self.global.verbose > 0 {
                    let _ = writeln!(stderr, "using the bundled taxonomy");
                }
                taxonomy::bundled()
            }
        };
        let t = Arc::new(t);
        self.taxonomy = Some(t.clone());
        Ok(t)
    }

    fn dataset(&mut self, stderr: &mut dyn Write) -> Result<&Dataset, Failure> {
        if self.dataset.is_none() {
            let path = self
                .global
                .dataset
                .clone()
                .ok_or_else(|| Failure::input("no dataset given (use --dataset or METAMORPH_DATASET)"))?;
            let text = read(&path)?;
            let t = self.taxonomy(stderr)?;
            let d = dataset::ingest(&text, DatasetFormat::from_path(&path), &t).map_err(|e| match e {
                dataset::DatasetError::ValidationFailed(_) => Failure::invalid(format!("{}: {e}", path.display())),
                _ => Failure::input(format!("{}: {e}", path.display())),
            })?;
            if self.global.verbose > 0 {
                let _ = writeln!(stderr, "dataset {} ({} records)", path.display(), d.len());
            }
            self.dataset = Some(d);
        }
        Ok(self.dataset.as_ref().expect("loaded above"))
    }

    /// A robot file, or else the name of a dataset record.
    fn robot(&mut self, arg: &str, stderr: &mut dyn Write) -> Result<RobotRecord, Failure> {
        let path = Path::new(arg);
        if path.is_file() {
            let text = read(path)?;
            let mut r = interchange::record_from_json(&text)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            if r.name.is_empty() {
                r.name = arg.to_string();
            }
            let t = self.taxonomy(stderr)?;
            let report = validate(&t, &r.morphology);
            if !report.is_valid() {
                let details: Vec<String> = report.errors.iter().map(|f| f.to_string()).collect();
                return Err(Failure::invalid(format!("{}: {}", path.display(), details.join("; "))));
            }
            return Ok(r);
        }
        if self.global.dataset.is_some() {
            if let Some(r) = self.dataset(stderr)?.get(arg) {
                return Ok(r.clone());
            }
            return Err(Failure::input(format!("`{arg}` is neither a file nor a dataset record")));
        }
        Err(Failure::input(format!("{arg}: no such file")))
    }

    fn cost_model(&mut self, stderr: &mut dyn Write) -> Result<CostModel, Failure> {
        let g = self.global;
        let mut c = CostModel {
            node_insert: g.node_insert,
            node_delete: g.node_delete,
            edge_insert: g.edge_insert,
            edge_delete: g.edge_delete,
            node_substitute: match g.substitution {
                SubstitutionArg::Unit => SubstitutionCost::Unit,
                SubstitutionArg::Taxonomy => SubstitutionCost::TaxonomyWeighted {
                    descriptor_penalty: g.descriptor_penalty,
                },
            },
            label_equality: g.labels,
            graph_form: g.form,
            taxonomy: None,
        };
        if g.substitution == SubstitutionArg::Taxonomy || g.form == GraphForm::Expanded {
            c.taxonomy = Some(self.taxonomy(stderr)?);
        }
        c.check(false).map_err(|e| Failure::input(e.to_string()))?;
        Ok(c)
    }

    fn budget(&self) -> Budget {
        Budget {
            max_nodes: self.global.max_nodes,
            max_states: self.global.max_states,
        }
    }
}

fn distance_failure(e: distance::DistanceError) -> Failure {
    match e {
        distance::DistanceError::InvalidMorphology(_) => Failure::invalid(e.to_string()),
        _ => Failure::input(e.to_string()),
    }
}

fn execute(cmd: &Command, ctx: &mut Context<'_>, out: &mut Out, stderr: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Validate { file } => cmd_validate(file, ctx, out, stderr),
        Command::Stats { split, profile, min_z } => {
            let d = ctx.dataset(stderr)?;
            let s = frequency_stats(d, *split, *profile).map_err(|e| Failure::input(e.to_string()))?;
            out.stats(&s, *min_z);
            Ok(EXIT_OK)
        }
        Command::Distance { a, b, metric, path } => {
            let (ra, rb) = (ctx.robot(a, stderr)?, ctx.robot(b, stderr)?);
            let c = ctx.cost_model(stderr)?;
            let m = metric.metric();
            let r = distance::distance(&ra.morphology, &rb.morphology, m, &c, ctx.budget()).map_err(distance_failure)?;
            // the index is recomputed rather than taken as `1 - distance` to avoid rounding noise
            let index = match m {
                Metric::Jaccard(p) => {
                    let fa = feature_set(&ra.morphology, p).map_err(|e| Failure::invalid(e.to_string()))?;
                    let fb = feature_set(&rb.morphology, p).map_err(|e| Failure::invalid(e.to_string()))?;
                    Some(distance::jaccard_index(&fa, &fb))
                }
                _ => None,
            };
            out.distance(&ra.name, &rb.name, m, &r, index, *path);
            Ok(if r.budget_exceeded { EXIT_BUDGET } else { EXIT_OK })
        }
        Command::Matrix { metric, exact_out } => {
            let c = ctx.cost_model(stderr)?;
            let budget = ctx.budget();
            let verbose = ctx.global.verbose;
            let d = ctx.dataset(stderr)?;
            if verbose > 0 {
                let _ = writeln!(stderr, "computing {0}x{0} matrix", d.len());
            }
            let m = distance_matrix(d, metric.metric(), &c, budget).map_err(distance_failure)?;
            for diag in &m.diagnostics {
                let _ = writeln!(stderr, "warning: cell ({}, {}): {}", diag.row, diag.column, diag.message);
            }
            if let Some(p) = exact_out {
                fs::write(p, interchange::exactness_to_csv(&m))
                    .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            }
            out.matrix(&m);
            let budget_hit = metric.metric() == Metric::GedExact && m.any_inexact();
            Ok(if budget_hit { EXIT_BUDGET } else { EXIT_OK })
        }
        Command::Knn { probe, k, metric } => {
            let p = ctx.robot(probe, stderr)?;
            let c = ctx.cost_model(stderr)?;
            let budget = ctx.budget();
            let d = ctx.dataset(stderr)?;
            let k = usize::try_from(*k).map_err(|_| Failure::input("k is too large"))?;
            let m = metric.metric();
            let list = nearest_neighbors(d, &p.morphology, k, m, &c, budget).map_err(distance_failure)?;
            out.neighbors(&list);
            let budget_hit = m == Metric::GedExact && list.iter().any(|n| !n.exact);
            Ok(if budget_hit { EXIT_BUDGET } else { EXIT_OK })
        }
        Command::Query { predicate, subsume } => {
            let t = if *subsume { Some(ctx.taxonomy(stderr)?) } else { None };
            let d = ctx.dataset(stderr)?;
            let hits = dataset::query(d, predicate, t.as_deref()).map_err(|e| Failure::input(e.to_string()))?;
            out.names(hits.iter().map(|r| r.name.as_str()));
            Ok(EXIT_OK)
        }
        Command::Export { kind, robot, links } => {
            let r = ctx.robot(robot, stderr)?;
            let text = match kind {
                ExportKind::Dot => interchange::to_dot(&r.morphology).map_err(|e| Failure::invalid(e.to_string()))?,
                ExportKind::Urdf => {
                    let map: BTreeMap<String, String> = links.iter().cloned().collect();
                    interchange::to_urdf_annotation(&r.morphology, &map).map_err(|e| Failure::input(e.to_string()))?
                }
                ExportKind::Json => interchange::record_to_json(&r),
            };
            match kind {
                ExportKind::Dot => out.document("dot", &r.name, &text),
                ExportKind::Urdf => out.document("urdf", &r.name, &text),
                ExportKind::Json => out.raw(&text),
            }
            Ok(EXIT_OK)
        }
        Command::Calibrate {
            a,
            b,
            c,
            ged,
            jaccard,
            tolerance,
        } => {
            if ged.len() != 3 || jaccard.len() != 3 {
                return Err(Failure::input("--ged and --jaccard each take three comma-separated values"));
            }
            let (ra, rb, rc) = (ctx.robot(a, stderr)?, ctx.robot(b, stderr)?, ctx.robot(c, stderr)?);
            let t = ctx.taxonomy(stderr)?;
            let pairs = [
                calibration_pair(&ra, &rb, ged[0], jaccard[0]),
                calibration_pair(&ra, &rc, ged[1], jaccard[1]),
                calibration_pair(&rb, &rc, ged[2], jaccard[2]),
            ];
            let report = calibrate(&pairs, Some(t), ctx.budget(), *tolerance);
            out.calibration(&report);
            Ok(EXIT_OK)
        }
    }
}

fn calibration_pair<'a>(x: &'a RobotRecord, y: &'a RobotRecord, ged: f64, jaccard: f64) -> CalibrationPair<'a> {
    CalibrationPair {
        label: format!("{}/{}", x.name, y.name),
        a: &x.morphology,
        b: &y.morphology,
        expected_ged: ged,
        expected_jaccard: jaccard,
    }
}

fn cmd_validate(file: &Path, ctx: &mut Context<'_>, out: &mut Out, stderr: &mut dyn Write) -> CliResult {
    let text = read(file)?;
    let t = ctx.taxonomy(stderr)?;
    let located = |e: &dyn std::fmt::Display| Failure::input(format!("{}: {e}", file.display()));
    let records = if DatasetFormat::from_path(file) == DatasetFormat::Csv {
        dataset::records_from_csv(&text).map_err(|e| located(&e))?
    } else if interchange::is_dataset_document(&text) {
        interchange::dataset_records_from_json(&text).map_err(|e| located(&e))?.1
    } else {
        vec![interchange::record_from_json(&text).map_err(|e| located(&e))?]
    };
    let reports: Vec<_> = records.iter().map(|r| (r.name.as_str(), validate(&t, &r.morphology))).collect();
    out.validation(&file.display().to_string(), &reports);
    let mut names = std::collections::BTreeSet::new();
    if let Some(d) = records.iter().find(|r| !names.insert(r.name.as_str())) {
        return Err(Failure::invalid(format!("{}: duplicate robot name `{}`", file.display(), d.name)));
    }
    let bad = reports.iter().filter(|(_, r)| !r.is_valid()).count();
    if bad > 0 {
        let _ = writeln!(stderr, "{}: {bad} record(s) with validation errors", file.display());
        return Ok(EXIT_INVALID);
    }
    Ok(EXIT_OK)
}
