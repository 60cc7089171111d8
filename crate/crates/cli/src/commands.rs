use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use upsilon_core::abw::{default_max_degree_all, sample_delta_margins};
use upsilon_core::karea::DualityOptions;
use upsilon_core::unitary::class_distance;
use upsilon_core::{
    enumerate_degree_range, enumerate_inequalities, gw_invariant, karea_duality_check, upsilon_estimate,
    upsilon_lower_bound, AlcovePoint, Error, ErrorKind, GwQuery, SchubertIndex,
};

use crate::parse::ParseError;

/// Estimates below the certified bound by more than this are reported as
/// an internal inconsistency.
pub const CONSISTENCY_SLACK: f64 = 1e-6;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Parse { flag: &'static str, error: ParseError },
    Io(String),
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Validation => 2,
                ErrorKind::Numeric => 3,
                ErrorKind::Consistency => 4,
            },
            CliError::Parse { .. } | CliError::Io(_) => 2,
            CliError::Inconsistent(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Parse { flag, error } => write!(f, "--{flag}: {error}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
            CliError::Inconsistent(e) => write!(f, "internal inconsistency: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub fn parse_err(flag: &'static str) -> impl FnOnce(ParseError) -> CliError {
    move |error| CliError::Parse { flag, error }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

/// Write to `out`, or to stdout when absent.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(io_err(path)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string(value).expect("plain data serializes");
    text.push('\n');
    text
}

/// A JSON array with one record per line.
fn to_json_lines<T: Serialize>(records: &[T]) -> String {
    if records.is_empty() {
        return "[]\n".into();
    }
    let body: Vec<String> = records
        .iter()
        .map(|r| format!("  {}", serde_json::to_string(r).expect("plain data serializes")))
        .collect();
    format!("[\n{}\n]\n", body.join(",\n"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn format_classes(classes: &[AlcovePoint]) -> String {
    classes
        .iter()
        .map(|c| c.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Serialize)]
struct GwReport {
    n: usize,
    r: usize,
    d: usize,
    classes: Vec<Vec<usize>>,
    partitions: Vec<Vec<usize>>,
    codimension: usize,
    required: usize,
    value: i64,
}

pub fn gw(n: usize, r: usize, classes: &[SchubertIndex], d: usize, format: Format) -> Result<String, CliError> {
    if let Some(bad) = classes.iter().find(|c| c.r() != r) {
        return Err(Error::Validation(format!(
            "subset {:?} has {} elements, expected r = {r}",
            bad.indices(),
            bad.r()
        ))
        .into());
    }
    let value = gw_invariant(&GwQuery::new(classes.to_vec(), d))?;
    let report = GwReport {
        n,
        r,
        d,
        classes: classes.iter().map(|c| c.indices().to_vec()).collect(),
        partitions: classes.iter().map(|c| c.to_partition().parts().to_vec()).collect(),
        codimension: classes.iter().map(|c| c.to_partition().size()).sum(),
        required: r * (n - r) + n * d,
        value,
    };
    Ok(match format {
        Format::Json => to_json(&report),
        Format::Text | Format::Csv => {
            let verdict = if report.codimension == report.required {
                "holds"
            } else {
                "fails, value is 0"
            };
            format!(
                "{value}\ndimension: sum of |λ| = {}, r(n-r) + n·d = {} ({verdict})\n",
                report.codimension, report.required
            )
        }
    })
}

pub fn abw(n: usize, l: usize, d_min: usize, d_max: Option<usize>) -> Result<String, CliError> {
    let d_max = d_max.unwrap_or_else(|| default_max_degree_all(n, l));
    let ineqs = if d_min == 0 {
        enumerate_inequalities(n, l, d_max)?
    } else {
        enumerate_degree_range(n, l, d_min, d_max)?
    };
    let records: Vec<_> = ineqs.iter().map(|i| i.record()).collect();
    Ok(to_json_lines(&records))
}

#[derive(Serialize)]
struct UpsilonReport {
    n: usize,
    l: usize,
    classes: Vec<AlcovePoint>,
    budget: usize,
    seed: u64,
    estimate: f64,
    lower_bound: f64,
    gap: f64,
    evaluations: usize,
}

/// Runs the estimate and the certified bound. The report is returned even
/// when the two contradict each other; the caller decides the exit code.
pub fn upsilon(
    classes: Vec<AlcovePoint>,
    budget: usize,
    seed: u64,
    format: Format,
) -> Result<(String, Option<CliError>), CliError> {
    let n = classes.first().map(AlcovePoint::n).unwrap_or(0);
    let l = classes.len();
    let ineqs = enumerate_inequalities(n, l, default_max_degree_all(n, l))?;
    let bound = upsilon_lower_bound(&classes, &ineqs)?;
    let est = upsilon_estimate(&classes, budget, seed)?;
    let report = UpsilonReport {
        n,
        l,
        budget,
        seed,
        estimate: est.value,
        lower_bound: bound,
        gap: est.value - bound,
        evaluations: est.evaluations,
        classes,
    };
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "l", "classes", "budget", "seed", "estimate", "lower_bound", "gap"])
                .and_then(|_| {
                    w.write_record([
                        report.n.to_string(),
                        report.l.to_string(),
                        format_classes(&report.classes),
                        report.budget.to_string(),
                        report.seed.to_string(),
                        report.estimate.to_string(),
                        report.lower_bound.to_string(),
                        report.gap.to_string(),
                    ])
                })
                .map_err(|e| CliError::Io(e.to_string()))?;
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(bytes).expect("csv output is UTF-8")
        }
        Format::Text => format!(
            "estimate: {}\nlower bound: {}\ngap: {}\n",
            report.estimate, report.lower_bound, report.gap
        ),
    };
    let failure = (report.estimate < report.lower_bound - CONSISTENCY_SLACK).then(|| {
        CliError::Inconsistent(format!(
            "estimate {} is below the certified lower bound {}",
            report.estimate, report.lower_bound
        ))
    });
    Ok((text, failure))
}

pub fn karea(zeta1: &AlcovePoint, zeta2: &AlcovePoint, options: &DualityOptions) -> Result<String, CliError> {
    let report = karea_duality_check(zeta1, zeta2, options)?;
    // The distance is recomputed independently of the report as a guard.
    let distance = class_distance(&zeta1.inverse(), zeta2)?;
    if (distance - report.distance).abs() > 1e-12 {
        return Err(CliError::Inconsistent(format!(
            "reported distance {} differs from {distance}",
            report.distance
        )));
    }
    Ok(to_json(&report))
}

/// Writes one CSV row per sample. Returns the CSV text and, when some
/// sample violates an inequality, the corresponding failure.
pub fn montecarlo(
    n: usize,
    l: usize,
    samples: usize,
    d_max: Option<usize>,
    seed: u64,
) -> Result<(String, Option<CliError>), CliError> {
    let d_max = d_max.unwrap_or_else(|| default_max_degree_all(n, l));
    let ineqs = enumerate_inequalities(n, l, d_max)?;
    let rows = sample_delta_margins(n, l, samples, &ineqs, seed)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["sample", "max_margin", "violations", "classes"])
        .map_err(csv_err)?;
    for (i, row) in rows.iter().enumerate() {
        w.write_record([
            i.to_string(),
            row.max_margin.to_string(),
            row.violations.to_string(),
            format_classes(&row.zeta),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let text = String::from_utf8(bytes).expect("csv output is UTF-8");
    let violating = rows.iter().filter(|r| r.violations > 0).count();
    let failure = (violating > 0)
        .then(|| CliError::Inconsistent(format!("{violating} of {samples} samples violate an inequality")));
    Ok((text, failure))
}
