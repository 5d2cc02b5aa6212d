use std::path::PathBuf;

use minsurf_core::catalog::{perturbed, CatalogSurface, NAMES};
use minsurf_core::surface::Immersion;

use crate::error::Failure;
use crate::manifest::{ingest, GridSpec};
use crate::report::{Header, IngestInfo, Perturbation, SourceInfo};

pub const MIN_N: usize = 32;
pub const MAX_N: usize = 1024;
pub const DEFAULT_N: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Deform,
    Monodromy,
    Verify,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Analyze => "analyze",
            Self::Deform => "deform",
            Self::Monodromy => "monodromy",
            Self::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Catalog(String),
    Manifest(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetChoice {
    Analytic,
    Fd,
}

/// One fully specified run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub source: Source,
    /// Nodes per axis for catalog surfaces.
    pub n: usize,
    pub theta: Option<f64>,
    pub scan: Option<usize>,
    pub tol_close: Option<f64>,
    pub perturb: Option<f64>,
    pub seed: u64,
    pub out: PathBuf,
    pub jets: Option<JetChoice>,
}

impl RunConfig {
    pub fn new(command: Command, source: Source, out: impl Into<PathBuf>) -> Self {
        Self {
            command,
            source,
            n: DEFAULT_N,
            theta: None,
            scan: None,
            tol_close: None,
            perturb: None,
            seed: 0,
            out: out.into(),
            jets: None,
        }
    }

    pub fn validate(&self) -> Result<(), Failure> {
        if !(self.n.is_power_of_two() && (MIN_N..=MAX_N).contains(&self.n)) {
            return Err(Failure::config(format!("--n must be a power of two in {MIN_N}..={MAX_N}, got {}", self.n)));
        }
        if let Some(t) = self.tol_close {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Failure::config(format!("--tol-close must be positive, got {t}")));
            }
        }
        if let Some(p) = self.perturb {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Failure::config(format!("--perturb must be positive, got {p}")));
            }
            if self.jets == Some(JetChoice::Analytic) {
                return Err(Failure::config("a perturbed surface has no analytic jets"));
            }
        }
        if let Some(t) = self.theta {
            if !t.is_finite() {
                return Err(Failure::config("--theta must be finite"));
            }
        }
        match self.command {
            Command::Deform if self.theta.is_none() => Err(Failure::config("deform needs --theta")),
            Command::Monodromy if self.scan.is_none() => Err(Failure::config("monodromy needs --scan")),
            _ => Ok(()),
        }
    }
}

/// The surface a command works on, with its provenance.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub immersion: Immersion,
    /// Before perturbation, for baselines.
    pub unperturbed: Option<Immersion>,
    pub catalog: Option<CatalogSurface>,
    pub header: Header,
}

pub fn load(cfg: &RunConfig) -> Result<Loaded, Failure> {
    cfg.validate()?;
    let (mut imm, catalog, source, ingest_info) = match &cfg.source {
        Source::Catalog(name) => {
            let c = CatalogSurface::from_name(name)
                .ok_or_else(|| Failure::source(format!("unknown catalog surface {name:?} (known: {})", NAMES.join(", "))))?;
            (c.build(cfg.n)?, Some(c), SourceInfo::Catalog { name: c.name(), n: cfg.n }, None)
        }
        Source::Manifest(path) => {
            if !path.exists() {
                return Err(Failure::source(format!("manifest {} does not exist", path.display())));
            }
            let got = ingest(path)?;
            let info = IngestInfo {
                renormalized_points: got.renormalized,
                flagged_points: got.flagged.len(),
                max_norm_drift: got.max_drift,
            };
            (got.immersion, None, SourceInfo::Manifest { path: path.display().to_string() }, Some(info))
        }
    };
    match cfg.jets {
        Some(JetChoice::Fd) => imm = imm.without_jets(),
        Some(JetChoice::Analytic) if imm.analytic_jets().is_none() => {
            return Err(Failure::config("--jets analytic: the source carries no jets"));
        }
        _ => {}
    }
    let (immersion, unperturbed, perturbation) = match cfg.perturb {
        Some(amplitude) => (perturbed(&imm, amplitude, cfg.seed)?, Some(imm), Some(Perturbation { amplitude, seed: cfg.seed })),
        None => (imm, None, None),
    };
    let header = Header {
        command: cfg.command.as_str(),
        source,
        jet_source: immersion.jet_source().as_str(),
        perturbation,
        ingest: ingest_info,
        grid: GridSpec::from_patch(immersion.patch()),
    };
    // A perturbed catalog surface no longer has the catalog's invariants.
    let catalog = if cfg.perturb.is_some() { None } else { catalog };
    Ok(Loaded { immersion, unperturbed, catalog, header })
}
