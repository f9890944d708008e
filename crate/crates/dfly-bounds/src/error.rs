use ball_core::BallError;
use certify_engine::EngineError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DflyError {
    /// A strict inequality that could not be certified; `margin` is its
    /// midpoint slack (negative or too close to zero).
    #[error("condition `{what}` not certified (margin {margin:e})")]
    Condition { what: &'static str, margin: f64 },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Ball(#[from] BallError),
}
