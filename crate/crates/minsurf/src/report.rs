//! Report documents and their writers.
//!
//! Every reported number is a [`Quantity`] or a [`Check`]: it carries the
//! tolerance it is judged against (if any) and a tag naming the identity or
//! construction it comes from.

use std::fs;
use std::path::Path;

use minsurf_core::grid::{GridPatch, ScalarField};
use serde::Serialize;

use crate::error::Failure;
use crate::manifest::GridSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub tag: &'static str,
}

impl Quantity {
    pub fn new(name: impl Into<String>, value: f64, tag: &'static str) -> Self {
        Self { name: name.into(), value: finite(value), tolerance: None, tag }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }
}

/// Non-finite numbers become JSON `null`.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

impl From<Status> for String {
    fn from(s: Status) -> String {
        match s {
            Status::Pass => "pass".into(),
            Status::Fail => "fail".into(),
            Status::Skipped(why) => format!("skipped: {why}"),
        }
    }
}

/// One suite item: `value ≤ tolerance` passes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub tag: &'static str,
    pub status: Status,
    pub value: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn measure(name: &'static str, tag: &'static str, value: f64, tolerance: f64) -> Self {
        let status = if value <= tolerance { Status::Pass } else { Status::Fail };
        Self { name, tag, status, value: finite(value), tolerance, note: None }
    }

    pub fn skipped(name: &'static str, tag: &'static str, tolerance: f64, why: impl Into<String>) -> Self {
        Self { name, tag, status: Status::Skipped(why.into()), value: None, tolerance, note: None }
    }

    /// A check whose computation itself failed.
    pub fn errored(name: &'static str, tag: &'static str, tolerance: f64, err: impl ToString) -> Self {
        Self { name, tag, status: Status::Fail, value: None, tolerance, note: Some(err.to_string()) }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Where the surface came from, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceInfo {
    Catalog { name: &'static str, n: usize },
    Manifest { path: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Perturbation {
    pub amplitude: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestInfo {
    pub renormalized_points: usize,
    pub flagged_points: usize,
    pub max_norm_drift: f64,
}

/// Fields shared by all command reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub command: &'static str,
    pub source: SourceInfo,
    pub jet_source: &'static str,
    pub perturbation: Option<Perturbation>,
    pub ingest: Option<IngestInfo>,
    pub grid: GridSpec,
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, doc: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(doc).map_err(|e| Failure::io(std::io::Error::other(e), name))?;
    text.push('\n');
    fs::write(dir.join(name), text).map_err(|e| Failure::io(e, name))
}

/// Shortest round-trip text for `x`, in exponent form when plain decimal
/// would need long runs of zeros.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// `u,v,value` rows in storage order.
pub fn write_field_csv(dir: &Path, name: &str, field: &ScalarField) -> Result<(), Failure> {
    let io = |e: csv::Error| Failure::io(std::io::Error::other(e), name);
    let mut w = csv::Writer::from_path(dir.join(name)).map_err(io)?;
    w.write_record(["u", "v", "value"]).map_err(io)?;
    let p: &GridPatch = field.patch();
    for i in 0..p.nu() {
        for j in 0..p.nv() {
            let (u, v) = p.coords(i, j);
            w.write_record([fmt_f64(u), fmt_f64(v), fmt_f64(field.at(i, j))]).map_err(io)?;
        }
    }
    w.flush().map_err(|e| Failure::io(e, name))
}
