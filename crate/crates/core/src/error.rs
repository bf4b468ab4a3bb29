use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {}", .0.join("; "))]
    InvalidInstance(Vec<String>),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("probability out of range at ({u},{v}): {p}")]
    ProbabilityOutOfRange { u: usize, v: usize, p: f64 },

    #[error("probability out of range: {0}")]
    Probability(f64),

    #[error("invalid distribution parameters: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("value {0} outside the domain [0,1]")]
    Domain(f64),

    #[error("index ({u},{v}) out of range")]
    IndexOutOfRange { u: usize, v: usize },

    #[error("pair ({u},{v}) probed while an endpoint is already matched")]
    ProbeOfMatchedVertex { u: usize, v: usize },

    #[error("pair ({u},{v}) probed twice")]
    DuplicateProbe { u: usize, v: usize },

    #[error("pair ({u},{v}) used twice in a matching")]
    VertexReused { u: usize, v: usize },

    #[error("instance too large for exhaustive search: smaller side {0} exceeds {1}")]
    TooLarge(usize, usize),

    #[error("monotonicity violated for left vertex {u}: weight {before} at y={y_before} rose to {after} at y={y_after}")]
    MonotonicityViolated {
        u: usize,
        y_before: f64,
        before: f64,
        y_after: f64,
        after: f64,
    },

    #[error("joint-sampler realizations have no file representation")]
    Unserializable,

    #[error("malformed instance file: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
