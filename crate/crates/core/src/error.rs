use alloc::string::String;

/// Errors shared across the crate.
///
/// Validation failures name the offending input; `Numerical` covers the rare
/// cases where an iteration fails to converge or a bracket collapses.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid subshift: {0}")]
    InvalidSubshift(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("word too short: need at least {needed} symbols, got {got}")]
    WordTooShort { needed: usize, got: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("pressure oracle undefined: {0}")]
    OracleUndefined(String),
    #[error("hyperbolic model is not volume preserving: {0}")]
    NotVolumePreserving(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = core::result::Result<T, Error>;
