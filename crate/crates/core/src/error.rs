use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("series of order {have} cannot be truncated at order {want}")]
    SeriesTooShort { have: usize, want: usize },

    #[error("invalid mask: {0}")]
    InvalidMask(String),

    #[error("mask parse error at {location}: {message}")]
    MaskParse { location: String, message: String },

    #[error("unknown catalog mask {name:?}; available: {available}")]
    UnknownCatalogMask { name: String, available: String },

    #[error("polynomial normalization: {0}")]
    Normalization(String),

    #[error("empty computable window: {0}")]
    EmptyWindow(String),

    #[error("hypothesis not satisfied: {0}")]
    HypothesisUnmet(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
