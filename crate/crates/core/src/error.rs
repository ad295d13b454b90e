use std::fmt;

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coordinates that reproduce a single surveyed sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SampleCoord {
    pub n_a: usize,
    pub n_b: usize,
    pub stream_id: u64,
    pub index: u64,
}

impl fmt::Display for SampleCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dims={}x{} stream_id={} index={}",
            self.n_a, self.n_b, self.stream_id, self.index
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m_ij - conj(m_ji)| = {defect:e}")]
    NonHermitianInput { defect: f64 },

    #[error("Hermitian eigensolver did not converge for a {dim}x{dim} matrix")]
    ConvergenceFailure { dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("trace is {trace}, expected 1")]
    InvalidTrace { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eig:e}")]
    NotPositive { min_eig: f64 },

    #[error("entropic index q = {0} is invalid: must be finite and > 0")]
    InvalidQ(f64),

    #[error("invalid survey configuration: {0}")]
    ConfigInvalid(String),

    #[error("cannot merge records for dims {left:?} and {right:?}")]
    DimsMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("sample {coord} failed: {source}")]
    Sample {
        coord: SampleCoord,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("record list is empty")]
    EmptyRecords,

    #[error("unknown statistic label `{0}`")]
    UnknownLabel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
