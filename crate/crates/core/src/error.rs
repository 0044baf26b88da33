use std::path::PathBuf;

use thiserror::Error;

/// A single malformed line found while parsing a session log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineDiagnostic {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for LineDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("session contains no readings")]
    EmptySession,

    #[error("calibration needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("duplicate calibration weight {0} lb")]
    DuplicateWeight(f64),

    #[error("weights must be sorted ascending ({previous} lb precedes {next} lb)")]
    UnsortedWeights { previous: f64, next: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("session log rejected ({} malformed line(s)): {}", .0.len(), join_diagnostics(.0))]
    Parse(Vec<LineDiagnostic>),

    #[error("invalid profile: {0}")]
    Profile(String),

    #[error("unsupported {kind} version {found} (expected {expected})")]
    Version {
        kind: &'static str,
        found: i64,
        expected: i64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn join_diagnostics(diags: &[LineDiagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
