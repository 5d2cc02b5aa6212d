use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Grid location `(i, j)` with `i` along `u` and `j` along `v`.
pub type Index2 = (usize, usize);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid patch: {0}")]
    InvalidPatch(String),
    #[error("field shape does not match its patch ({expected} values expected, got {got})")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("non-finite value at grid point {index:?}")]
    NonFinite { index: Index2 },
    #[error("degenerate metric at grid point {index:?} (det = {det:e})")]
    DegenerateMetric { index: Index2, det: f64 },
    #[error("differential has rank < 2 at grid point {index:?}: not an immersion")]
    NotImmersion { index: Index2 },
    #[error("position leaves the unit sphere at grid point {index:?} (| |f| - 1 | = {drift:e})")]
    OffSphere { index: Index2, drift: f64 },
    #[error(
        "negative radicand {radicand:e} in a± at grid point {index:?}: input is not a minimal \
         immersion with the stated metric"
    )]
    Inconsistent { index: Index2, radicand: f64 },
    #[error("analytic jets requested but the immersion carries none")]
    MissingJets,
    #[error("the whole patch lies on the circle locus: adapted frame undefined (superminimal)")]
    SuperminimalPatch,
    #[error(
        "no isothermal chart available: the grid chart is not conformal and the adapted \
         coordinate could not be built; use a catalog surface with a conformal chart"
    )]
    NoIsothermalChart,
    #[error("{count} masked grid points inside the integration domain (first at {first:?})")]
    MaskedPoints { count: usize, first: Index2 },
    #[error("frame integration is path dependent: discrepancy {discrepancy:e} > {tolerance:e}")]
    IntegrabilityBroken { discrepancy: f64, tolerance: f64 },
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("excision discs around zeros overlap")]
    OverlappingDiscs,
    #[error("zero of a log-field lies outside every excision disc at grid point {index:?}")]
    UnexcisedZero { index: Index2 },
    #[error("patch is not closed: global integrals are meaningless")]
    NotClosed,
    #[error("theta scan needs at least {min} samples, got {got}")]
    ScanTooCoarse { min: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
