use thiserror::Error;

/// Errors shared across the crate. Operations that take levelled data
/// return `LevelMismatch` rather than silently re-levelling, so that a
/// caller always knows which level a statement was decided at.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("coefficient mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("not invertible: {0}")]
    NonInvertible(String),
    #[error("not a groupoid point: {0}")]
    NotInGroupoid(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("not in the parameter space: {0}")]
    NotInSpace(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
