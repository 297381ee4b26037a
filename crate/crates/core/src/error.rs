use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operator is not unitary (max |U†U - I| = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} requires at least {min}, got {got}")]
    BadArity {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("state is not normalized (|ψ|² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("the two unitaries differ only by a global phase and cannot be discriminated")]
    Indistinguishable,

    #[error("operator has no Bloch axis (it is not a traceless Hermitian unitary)")]
    NoAxis,

    #[error("detector pattern {0} is outside the decision rule")]
    UnexpectedPattern(String),

    #[error("post-selection has zero success probability")]
    ZeroSupport,

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("empty input")]
    EmptyInput,

    #[error("{photons} photons exceed the Fock cutoff of {cutoff}")]
    ExceedsCutoff { photons: usize, cutoff: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Errors caused by a bad configuration rather than a failing model.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }

    pub(crate) fn out_of_range(name: &'static str, value: f64, min: f64, max: f64) -> Self {
        Error::OutOfRange {
            name,
            value,
            min,
            max,
        }
    }
}

/// Checks `value ∈ [0, 1]`, rejecting NaN.
pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::out_of_range(name, value, 0.0, 1.0))
    }
}
