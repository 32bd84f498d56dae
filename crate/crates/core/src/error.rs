use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("length mismatch: pattern has {pattern} symbols, text fragment has {text}")]
    LengthMismatch { pattern: usize, text: usize },
    #[error(
        "IPM window too large: haystack {haystack} must be shorter than twice the needle {needle}"
    )]
    IpmWindowTooLarge { needle: usize, haystack: usize },
    #[error("sparsifier precondition violated: {wildcards} wildcards in a pattern of length {len} (need 4D < m)")]
    SparsifierPreconditionViolated { wildcards: usize, len: usize },
    #[error("position {pos} out of range 1..={max}")]
    PositionOutOfRange { pos: usize, max: usize },
    #[error("text chunk of length {text} exceeds 3m/2 for pattern length {pattern}")]
    ChunkTooLong { text: usize, pattern: usize },
    #[error("periodic precondition violated: {0}")]
    PeriodicPreconditionViolated(&'static str),
    #[error("no structural decomposition available: {0}")]
    DecompositionUnavailable(&'static str),
    #[error("occurrence sets disagree on context (pattern length or threshold)")]
    ContextMismatch,
    #[error("invalid lower-bound parameters: {0}")]
    InvalidLowerBoundParams(&'static str),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
