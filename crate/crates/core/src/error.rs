use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),

    #[error("time grid not aligned with the cycle: {0}")]
    Misaligned(String),

    #[error("window exceeds series extent: {0}")]
    OutOfRange(String),

    #[error("integration became non-finite at step {step}")]
    Unstable { step: usize },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("diode state iteration did not settle within {iterations} iterations at step {step}")]
    DiodeNonConvergence { step: usize, iterations: usize },

    #[error("no periodic state after {cycles} cycles (achieved error {achieved:e})")]
    NotConverged { cycles: usize, achieved: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("error sequence is not decaying (log-slope {slope:e})")]
    Divergent { slope: f64 },

    #[error("asymptotic value is zero")]
    ZeroAsymptote,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{count} mesh nodes are unreachable from any seed")]
    Unreachable { count: usize },

    #[error("invalid topology: {0}")]
    Topology(String),

    #[error("degenerate cross-section at station {station}: no intersected cells")]
    DegenerateCut { station: usize },

    #[error("mesh carries no wall faces")]
    MissingWallTags,

    #[error("{source_name}:{line}: {message}")]
    Parse { source_name: String, line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse { source_name: source_name.to_string(), line, message: message.into() }
    }

    /// True for failures caused by malformed input files.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }

    /// True for mesh / network connectivity failures.
    pub fn is_topology(&self) -> bool {
        matches!(self, Error::Unreachable { .. } | Error::Topology(_) | Error::Singular(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
