use ball_core::BallError;
use certify_engine::EngineError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExpansionError {
    #[error("window {0} is not a certified simple eigenvalue")]
    NotSimple(usize),
    #[error("mode {mode}: triangular pivot {index} contains zero")]
    Pivot { mode: usize, index: usize },
    #[error("mode {0}: finite projector error not certified")]
    ProjectorError(usize),
    #[error("separation: {0}")]
    Separation(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Ball(#[from] BallError),
}
