use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: String, expected: usize, found: usize },

    #[error("containment violation ({context}); witness support {witness:?}")]
    ContainmentViolation { context: String, witness: Vec<usize> },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("not an equivariant chain map: {0}")]
    NotChainMap(String),

    #[error("insufficient resolution depth: need {needed}, have {have}; build a deeper resolution")]
    InsufficientDepth { needed: usize, have: usize },

    #[error("degree {requested} lies outside the certified window (lowest certified {certified_min}); rerun with p_min <= {suggested_p_min}")]
    WindowTooSmall { requested: i64, certified_min: i64, suggested_p_min: i64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("missing companion data: {0}")]
    MissingCompanion(String),

    #[error("Smith decomposition fails at alpha {alpha}, degree {degree}; witness {witness}")]
    SmithViolation { alpha: i64, degree: i64, witness: String },

    #[error("parse error: {0}")]
    Parse(String),
}
