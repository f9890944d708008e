use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BallError {
    #[error("indeterminate: {0}")]
    Indeterminate(&'static str),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("cannot parse ball: {0}")]
    Parse(String),
}
