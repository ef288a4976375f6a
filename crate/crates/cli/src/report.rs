use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::bench::{BenchReport, Sweep, SCHEMA_VERSION};

#[derive(Serialize)]
struct ReportRow<'a> {
    label: String,
    workload: &'a str,
    mode: &'static str,
    tasks: usize,
    workers_per_kernel: usize,
    shot_workers: usize,
    shots: u64,
    repetitions: usize,
    median_s: f64,
    min_s: f64,
    max_s: f64,
    speedup: Option<f64>,
    valid: bool,
}

#[derive(Serialize)]
struct SweepCsvRow<'a> {
    workload: &'a str,
    tasks: usize,
    total_workers: usize,
    mode: &'static str,
    workers_per_kernel: usize,
    median_s: f64,
    speedup: Option<f64>,
    valid: bool,
}

pub fn reports_csv(reports: &[BenchReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(ReportRow {
            label: r.label(),
            workload: &r.workload,
            mode: r.mode.as_str(),
            tasks: r.tasks,
            workers_per_kernel: r.workers_per_kernel,
            shot_workers: r.shot_workers,
            shots: r.shots,
            repetitions: r.repetitions,
            median_s: r.median_s,
            min_s: r.times_s.iter().copied().fold(f64::INFINITY, f64::min),
            max_s: r.times_s.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            speedup: r.speedup,
            valid: r.valid,
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn sweep_csv(sweep: &Sweep) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &sweep.rows {
        w.serialize(SweepCsvRow {
            workload: &sweep.workload,
            tasks: sweep.tasks,
            total_workers: row.total_workers,
            mode: row.mode.as_str(),
            workers_per_kernel: row.workers_per_kernel,
            median_s: row.median_s,
            speedup: row.speedup,
            valid: row.valid,
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Writes `text` to `path`, or stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{}", text.trim_end()) {
                // a closed pipe (`qcrt ... | head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.context("writing stdout"),
            }
        }
    }
}

pub fn is_csv(path: Option<&Path>) -> bool {
    path.and_then(|p| p.extension())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

const REPORT_FIELDS: [(&str, Kind); 17] = [
    ("schema_version", Kind::Int),
    ("workload", Kind::Str),
    ("mode", Kind::Str),
    ("tasks", Kind::Int),
    ("workers_per_kernel", Kind::Int),
    ("shot_workers", Kind::Int),
    ("shots", Kind::Int),
    ("seed", Kind::Int),
    ("repetitions", Kind::Int),
    ("warmup", Kind::Int),
    ("times_s", Kind::Array),
    ("median_s", Kind::Num),
    ("digests", Kind::Array),
    ("valid", Kind::Bool),
    ("baseline", Kind::OptStr),
    ("speedup", Kind::OptNum),
    ("warnings", Kind::Array),
];

#[derive(Clone, Copy, Debug)]
enum Kind {
    Int,
    Num,
    Str,
    Bool,
    Array,
    OptStr,
    OptNum,
}

impl Kind {
    fn accepts(self, v: &Value) -> bool {
        match self {
            Kind::Int => v.is_u64(),
            Kind::Num => v.is_number(),
            Kind::Str => v.is_string(),
            Kind::Bool => v.is_boolean(),
            Kind::Array => v.is_array(),
            Kind::OptStr => v.is_null() || v.is_string(),
            Kind::OptNum => v.is_null() || v.is_number(),
        }
    }
}

/// Checks a bench report object against schema version
/// [`SCHEMA_VERSION`]: every field present with the right JSON type, no
/// extra fields, repetition count matching `times_s`.
pub fn check_report_schema(v: &Value) -> Result<()> {
    let obj = v.as_object().context("report is not an object")?;
    if obj.get("schema_version").and_then(Value::as_u64) != Some(SCHEMA_VERSION as u64) {
        bail!("schema_version must be {SCHEMA_VERSION}");
    }
    for (key, kind) in REPORT_FIELDS {
        let field = obj
            .get(key)
            .with_context(|| format!("missing field '{key}'"))?;
        if !kind.accepts(field) {
            bail!("field '{key}' should be {kind:?}, got {field}");
        }
    }
    if let Some(extra) = obj
        .keys()
        .find(|k| !REPORT_FIELDS.iter().any(|(f, _)| f == k))
    {
        bail!("unexpected field '{extra}'");
    }
    let reps = obj["repetitions"].as_u64().unwrap_or_default() as usize;
    if obj["times_s"].as_array().map(Vec::len) != Some(reps) {
        bail!("times_s must hold one entry per repetition");
    }
    if !matches!(obj["mode"].as_str(), Some("one-by-one" | "parallel")) {
        bail!("unknown mode {}", obj["mode"]);
    }
    Ok(())
}

/// Checks a sweep document: versioned, with rows and a valid report per row.
pub fn check_sweep_schema(v: &Value) -> Result<()> {
    if v.get("schema_version").and_then(Value::as_u64) != Some(SCHEMA_VERSION as u64) {
        bail!("schema_version must be {SCHEMA_VERSION}");
    }
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .context("missing rows")?;
    let reports = v
        .get("reports")
        .and_then(Value::as_array)
        .context("missing reports")?;
    if rows.len() != reports.len() {
        bail!("{} rows but {} reports", rows.len(), reports.len());
    }
    for r in reports {
        check_report_schema(r)?;
    }
    Ok(())
}
