use ball_core::BallError;
use certify_engine::EngineError;
use dfly_bounds::DflyError;
use gkw_model::GkwError;
use spectral_expansion::ExpansionError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("malformed record: {0}")]
    Record(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Gkw(#[from] GkwError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Dfly(#[from] DflyError),
    #[error(transparent)]
    Ball(#[from] BallError),
}

impl PipelineError {
    /// Certification outcomes are worth storing; I/O and format errors are not.
    pub fn is_certification_failure(&self) -> bool {
        matches!(
            self,
            PipelineError::Gkw(_)
                | PipelineError::Engine(_)
                | PipelineError::Expansion(_)
                | PipelineError::Dfly(_)
        )
    }
}
