use thiserror::Error;

/// Errors produced by the decomposition toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("signal is empty")]
    EmptySignal,

    #[error("grid is not strictly increasing at index {0}")]
    GridNotIncreasing(usize),

    #[error("grid point {value} at index {index} lies outside [0,1]")]
    GridOutOfRange { index: usize, value: f64 },

    #[error("operation requires a uniform grid; resample first")]
    NonUniformGrid,

    #[error("length mismatch: {left} vs {right} ({context})")]
    LengthMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    #[error("grids do not match ({0})")]
    GridMismatch(&'static str),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("instantaneous phase is not strictly increasing at index {0}")]
    PhaseNotIncreasing(usize),

    #[error("instantaneous amplitude {value} at t={time} is below the 1e-8 floor")]
    AmplitudeUnderflow { time: f64, value: f64 },

    #[error("all {0} regression bins are empty")]
    AllBinsEmpty(usize),

    #[error("regression needs at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("cannot seed {requested} groups from {available} ridges")]
    TooFewRidges { requested: usize, available: usize },

    #[error("unknown builtin shape '{0}'; available: {1}")]
    UnknownShape(String, &'static str),

    #[error("expected a real-valued signal")]
    ComplexSignal,

    #[error("{path}: parse error on line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
