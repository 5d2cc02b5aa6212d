//! Sampled immersions on disk: a JSON manifest next to raw little-endian
//! `f64` blocks.
//!
//! ```json
//! {
//!   "kind": "sampled",
//!   "grid": { "nu": 64, "nv": 64, "u_range": [0, 4.44], "v_range": [0, 4.44],
//!             "periodic_u": true, "periodic_v": true },
//!   "position": "position.f64",
//!   "jets": { "first": "jets1.f64", "second": "jets2.f64" },
//!   "endianness": "little",
//!   "layout": "row-major, v fastest"
//! }
//! ```
//!
//! Per point the blocks hold 5 values (`f`), 10 (`f_u`, `f_v`) and 15
//! (`f_uu`, `f_uv`, `f_vv`). A non-periodic axis samples both endpoints
//! unless `capped_u` / `capped_v` is set, in which case nodes sit at cell
//! centres (a pole-capped sphere chart). Data paths are relative to the
//! manifest.

use std::fs;
use std::path::{Path, PathBuf};

use minsurf_core::grid::{Axis, AxisKind, Field, GridPatch};
use minsurf_core::linalg::Vec5;
use minsurf_core::surface::{Immersion, JetSource, Jets};
use minsurf_core::UNIT_NORM_TOL;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const LAYOUT: &str = "row-major, v fastest";

/// Drift up to this is renormalized silently.
pub const DRIFT_SILENT: f64 = 1e-9;
/// Drift up to this is renormalized and flagged; beyond it the file is rejected.
pub const DRIFT_REJECT: f64 = 1e-6;
/// `det g ≤ DEGENERATE_METRIC · E G` counts as a degenerate metric.
pub const DEGENERATE_METRIC: f64 = 1e-10;

/// Most locations listed in an error.
const MAX_LOCATIONS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    pub u_range: [f64; 2],
    pub v_range: [f64; 2],
    pub periodic_u: bool,
    pub periodic_v: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub capped_u: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub capped_v: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JetPaths {
    pub first: String,
    pub second: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub kind: String,
    pub grid: GridSpec,
    pub position: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jets: Option<JetPaths>,
    pub endianness: String,
    pub layout: String,
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed manifest {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("unsupported manifest: {0}")]
    Format(String),
    #[error("{count} non-finite values, first at {locations:?}")]
    NonFinite { count: usize, locations: Vec<(usize, usize)> },
    #[error("|f| drifts from 1 by {drift:e} at grid point {index:?} (limit {DRIFT_REJECT:e})")]
    Drift { index: (usize, usize), drift: f64 },
    #[error("degenerate metric at grid point {index:?} (det g = {det:e})")]
    DegenerateMetric { index: (usize, usize), det: f64 },
    #[error(transparent)]
    Core(#[from] minsurf_core::Error),
}

impl IngestError {
    /// Grid points the error refers to.
    pub fn locations(&self) -> Vec<(usize, usize)> {
        match self {
            Self::NonFinite { locations, .. } => locations.clone(),
            Self::Drift { index, .. } | Self::DegenerateMetric { index, .. } => vec![*index],
            _ => Vec::new(),
        }
    }
}

/// A validated immersion plus what ingestion had to do to it.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub immersion: Immersion,
    pub jet_source: JetSource,
    /// Points whose norm was rescaled onto the sphere.
    pub renormalized: usize,
    /// Points with drift in `(DRIFT_SILENT, DRIFT_REJECT]`.
    pub flagged: Vec<(usize, usize)>,
    pub max_drift: f64,
}

fn axis(n: usize, range: [f64; 2], periodic: bool, capped: bool) -> Result<Axis, IngestError> {
    match (periodic, capped) {
        (true, true) => Err(IngestError::Format("an axis cannot be both periodic and capped".into())),
        (true, false) => Ok(Axis::periodic(n, range[0], range[1])),
        (false, true) => Ok(Axis::capped(n, range[0], range[1])),
        (false, false) => Ok(Axis::open(n, range[0], range[1])),
    }
}

impl GridSpec {
    pub fn patch(&self) -> Result<GridPatch, IngestError> {
        let u = axis(self.nu, self.u_range, self.periodic_u, self.capped_u)?;
        let v = axis(self.nv, self.v_range, self.periodic_v, self.capped_v)?;
        Ok(GridPatch::new(u, v)?)
    }

    pub fn from_patch(p: &GridPatch) -> Self {
        let (u, v) = (p.u(), p.v());
        Self {
            nu: u.n,
            nv: v.n,
            u_range: [u.min, u.max],
            v_range: [v.min, v.max],
            periodic_u: u.is_periodic(),
            periodic_v: v.is_periodic(),
            capped_u: u.kind == AxisKind::Capped,
            capped_v: v.kind == AxisKind::Capped,
        }
    }
}

fn read_block(path: &Path, points: usize, per_point: usize) -> Result<Vec<f64>, IngestError> {
    let bytes = fs::read(path).map_err(|source| IngestError::Io { path: path.to_owned(), source })?;
    let expected = points * per_point * 8;
    if bytes.len() != expected {
        return Err(IngestError::Format(format!(
            "{}: {} bytes, expected {expected} ({points} points x {per_point} values)",
            path.display(),
            bytes.len()
        )));
    }
    Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect())
}

fn non_finite(patch: &GridPatch, data: &[f64], per_point: usize) -> Result<(), IngestError> {
    let bad: Vec<usize> = data
        .par_chunks(per_point)
        .enumerate()
        .filter(|(_, c)| c.iter().any(|x| !x.is_finite()))
        .map(|(k, _)| k)
        .collect();
    if bad.is_empty() {
        return Ok(());
    }
    let locations = bad.iter().take(MAX_LOCATIONS).map(|&k| patch.ij(k)).collect();
    Err(IngestError::NonFinite { count: bad.len(), locations })
}

fn vectors(patch: GridPatch, data: &[f64], per_point: usize, slot: usize) -> Result<Field<Vec5>, IngestError> {
    let values = data.chunks_exact(per_point).map(|c| Vec5::from_column_slice(&c[5 * slot..5 * slot + 5])).collect();
    Ok(Field::new(patch, values)?)
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    base.join(rel)
}

pub fn read_manifest(path: &Path) -> Result<Manifest, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io { path: path.to_owned(), source })?;
    let m: Manifest = serde_json::from_str(&text).map_err(|source| IngestError::Json { path: path.to_owned(), source })?;
    if m.kind != "sampled" {
        return Err(IngestError::Format(format!("kind {:?}, expected \"sampled\"", m.kind)));
    }
    if m.endianness != "little" {
        return Err(IngestError::Format(format!("endianness {:?}, expected \"little\"", m.endianness)));
    }
    if m.layout != LAYOUT {
        return Err(IngestError::Format(format!("layout {:?}, expected {LAYOUT:?}", m.layout)));
    }
    Ok(m)
}

/// Loads and validates a sampled immersion.
///
/// Norm drift `| |f| − 1 |` is left alone up to `1e-12`, renormalized up to
/// `1e-9`, renormalized and flagged up to `1e-6`, and rejected beyond. A
/// manifest without jets falls back to difference jets.
pub fn ingest(path: &Path) -> Result<Ingested, IngestError> {
    let m = read_manifest(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let patch = m.grid.patch()?;
    let n = patch.len();

    let raw = read_block(&resolve(base, &m.position), n, 5)?;
    let jet_blocks = match &m.jets {
        Some(j) => Some((read_block(&resolve(base, &j.first), n, 10)?, read_block(&resolve(base, &j.second), n, 15)?)),
        None => None,
    };

    non_finite(&patch, &raw, 5)?;
    if let Some((a, b)) = &jet_blocks {
        non_finite(&patch, a, 10)?;
        non_finite(&patch, b, 15)?;
    }

    let drift: Vec<f64> = raw.par_chunks(5).map(|c| (Vec5::from_column_slice(c).norm() - 1.0).abs()).collect();
    if let Some((k, &d)) = drift.iter().enumerate().find(|(_, &d)| d > DRIFT_REJECT) {
        return Err(IngestError::Drift { index: patch.ij(k), drift: d });
    }
    let max_drift = drift.iter().copied().fold(0.0, f64::max);
    let flagged: Vec<(usize, usize)> =
        drift.iter().enumerate().filter(|(_, &d)| d > DRIFT_SILENT).map(|(k, _)| patch.ij(k)).collect();
    let mut renormalized = 0;
    let values: Vec<Vec5> = raw
        .chunks_exact(5)
        .zip(&drift)
        .map(|(c, &d)| {
            let p = Vec5::from_column_slice(c);
            if d > UNIT_NORM_TOL {
                renormalized += 1;
                p / p.norm()
            } else {
                p
            }
        })
        .collect();
    let position = Field::new(patch, values)?;

    let jets = match jet_blocks {
        Some((a, b)) => Some(Jets {
            fu: vectors(patch, &a, 10, 0)?,
            fv: vectors(patch, &a, 10, 1)?,
            fuu: vectors(patch, &b, 15, 0)?,
            fuv: vectors(patch, &b, 15, 1)?,
            fvv: vectors(patch, &b, 15, 2)?,
            source: JetSource::Analytic,
        }),
        None => None,
    };
    let immersion = Immersion::new(position, jets)?;
    check_metric(&immersion)?;
    Ok(Ingested { jet_source: immersion.jet_source(), immersion, renormalized, flagged, max_drift })
}

fn check_metric(imm: &Immersion) -> Result<(), IngestError> {
    let jets = imm.jets()?;
    let (fu, fv) = (jets.fu.values(), jets.fv.values());
    let bad = (0..fu.len()).into_par_iter().find_first(|&k| {
        let (e, f, g) = (fu[k].norm_squared(), fu[k].dot(&fv[k]), fv[k].norm_squared());
        !(e * g - f * f > DEGENERATE_METRIC * e * g)
    });
    match bad {
        Some(k) => {
            let (e, f, g) = (fu[k].norm_squared(), fu[k].dot(&fv[k]), fv[k].norm_squared());
            Err(IngestError::DegenerateMetric { index: imm.patch().ij(k), det: e * g - f * f })
        }
        None => Ok(()),
    }
}

fn write_block(path: &Path, data: impl Iterator<Item = f64>) -> std::io::Result<()> {
    let bytes: Vec<u8> = data.flat_map(f64::to_le_bytes).collect();
    fs::write(path, bytes)
}

fn interleave<'a>(fields: &'a [&'a Field<Vec5>]) -> impl Iterator<Item = f64> + 'a {
    let n = fields[0].values().len();
    (0..n).flat_map(move |k| fields.iter().flat_map(move |f| f.values()[k].iter().copied()))
}

/// Writes `<stem>.json` and its data blocks into `dir`; analytic jets are
/// written when the immersion carries them. Returns the manifest path.
pub fn export(imm: &Immersion, dir: &Path, stem: &str) -> std::io::Result<PathBuf> {
    export_fields(imm.position(), imm.analytic_jets(), dir, stem)
}

/// [`export`] for raw fields, e.g. a deformed patch whose norm drift is
/// above the in-memory tolerance.
pub fn export_fields(position: &Field<Vec5>, jets: Option<&Jets>, dir: &Path, stem: &str) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let patch = position.patch();
    let position_file = format!("{stem}_position.f64");
    write_block(&dir.join(&position_file), interleave(&[position]))?;
    let jets = match jets {
        Some(j) => {
            let paths = JetPaths { first: format!("{stem}_jets1.f64"), second: format!("{stem}_jets2.f64") };
            write_block(&dir.join(&paths.first), interleave(&[&j.fu, &j.fv]))?;
            write_block(&dir.join(&paths.second), interleave(&[&j.fuu, &j.fuv, &j.fvv]))?;
            Some(paths)
        }
        None => None,
    };
    let m = Manifest {
        kind: "sampled".into(),
        grid: GridSpec::from_patch(patch),
        position: position_file,
        jets,
        endianness: "little".into(),
        layout: LAYOUT.into(),
    };
    let path = dir.join(format!("{stem}.json"));
    let mut text = serde_json::to_string_pretty(&m).map_err(std::io::Error::other)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}
