use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("elements belong to different defining graphs")]
    GraphMismatch,

    #[error("enumeration cap exceeded after visiting {0} sets")]
    CapExceeded(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconsistent periods: {0}")]
    InconsistentPeriods(String),

    #[error("conclusion failed: {0}")]
    ConclusionFailed(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
