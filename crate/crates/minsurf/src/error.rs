use serde::Serialize;

use crate::manifest::IngestError;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTEGRITY: i32 = 3;

/// A command that could not produce its report. Serialized as the
/// machine-readable error document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub code: &'static str,
    #[serde(skip)]
    pub exit: i32,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub locations: Vec<(usize, usize)>,
}

impl Failure {
    pub fn new(code: &'static str, exit: i32, message: impl Into<String>) -> Self {
        Self { code, exit, message: message.into(), locations: Vec::new() }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new("E_CONFIG", EXIT_USAGE, message)
    }

    pub fn source(message: impl Into<String>) -> Self {
        Self::new("E_SOURCE", EXIT_USAGE, message)
    }

    pub fn io(err: std::io::Error, what: &str) -> Self {
        Self::new("E_IO", EXIT_USAGE, format!("{what}: {err}"))
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            error: &'a Failure,
        }
        serde_json::to_string_pretty(&Doc { error: self }).expect("error document serializes")
    }
}

impl From<minsurf_core::Error> for Failure {
    fn from(e: minsurf_core::Error) -> Self {
        use minsurf_core::Error::*;
        let message = e.to_string();
        let (code, exit) = match &e {
            ScanTooCoarse { .. } => ("E_SCAN_TOO_COARSE", EXIT_USAGE),
            InvalidArgument(_) | InvalidPatch(_) | MissingJets | InvalidLoop(_) => ("E_CONFIG", EXIT_USAGE),
            _ => ("E_INTEGRITY", EXIT_INTEGRITY),
        };
        let locations = match e {
            NonFinite { index } | DegenerateMetric { index, .. } | NotImmersion { index } | OffSphere { index, .. } => {
                vec![index]
            }
            Inconsistent { index, .. } | UnexcisedZero { index } => vec![index],
            MaskedPoints { first, .. } => vec![first],
            _ => Vec::new(),
        };
        Self { code, exit, message, locations }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        let locations = e.locations();
        let (code, message) = match &e {
            IngestError::Io { path, source } if source.kind() == std::io::ErrorKind::NotFound => {
                ("E_SOURCE", format!("{} does not exist", path.display()))
            }
            _ => ("E_INGEST", e.to_string()),
        };
        Self { code, exit: EXIT_USAGE, message, locations }
    }
}
