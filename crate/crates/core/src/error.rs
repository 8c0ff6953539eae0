use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver, diagnostics and I/O layers.
#[derive(Debug, Error)]
pub enum SbppError {
    #[error("invalid torus: {0}")]
    InvalidTorus(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("field contains {count} non-finite value(s), first at flat index {first}")]
    NonFinite { count: usize, first: usize },

    #[error("field shape mismatch: expected {expected:?}, got {found:?}")]
    ShapeMismatch { expected: [usize; 3], found: [usize; 3] },

    #[error("exponent {0} outside the admissible range [1, 6]")]
    ExponentOutOfRange(f64),

    #[error("field has no positive part; the Nehari projection is undefined")]
    NoPositivePart,

    #[error("zero field is excluded from the Nehari manifold")]
    ZeroField,

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("field is off the Nehari manifold: relative residual {residual:.3e} exceeds {tolerance:.3e}")]
    OffManifold { residual: f64, tolerance: f64 },

    #[error("barycenter undefined: integral of the energy density is {0:.3e} (must be positive)")]
    NonPositiveDensity(f64),

    #[error("bump unresolved: {cells:.2} grid cells across the profile core (need at least {required})")]
    Unresolved { cells: f64, required: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("solver did not converge: {0}")]
    NotConverged(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("bad field file: {0}")]
    Format(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = SbppError> = std::result::Result<T, E>;

impl SbppError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SbppError::Io {
            path: path.into(),
            source,
        }
    }
}
