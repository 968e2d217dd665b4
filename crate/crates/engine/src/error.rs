use thiserror::Error;

/// Errors surfaced by the engine's fallible operations.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("cell ({row},{col}) is not a cell of the partition")]
    CellOutOfShape { row: usize, col: usize },

    #[error("partition parts must be positive and weakly decreasing")]
    MalformedPartition,

    #[error("partition tuple has length {got}, expected rank {want}")]
    RankMismatch { got: usize, want: usize },

    #[error("parameter point fails genericity: {0}")]
    NonGeneric(String),

    #[error("series has no invertible constant term")]
    ZeroConstantTerm,

    #[error("series iteration did not terminate inside the truncation window")]
    WindowOverflow,

    #[error("power-sum specialization degree {have} too small, need {need}")]
    DegreeTooSmall { have: usize, need: usize },

    #[error("dual evaluation paths disagree in {context}: {detail}")]
    OracleDisagreement { context: String, detail: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("assembled series has unexpected support: {0}")]
    SupportViolation(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;
