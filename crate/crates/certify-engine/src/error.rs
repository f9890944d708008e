use ball_core::BallError;
use gkw_model::GkwError;
use thiserror::Error;
use validated_linalg::LinalgError;

/// The gate of the certification chain that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Contour,
    Beta,
    Alpha,
    Theta,
    Multiplicity,
    Eigenvalue,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("contour gate: {0}")]
    Contour(LinalgError),
    #[error("Neumann gate failed: beta = {0:.3e}")]
    Beta(f64),
    #[error("small-gain gate failed: alpha = {0:.3e}")]
    Alpha(f64),
    #[error("projector gate failed: theta = {0:.3e}")]
    Theta(f64),
    #[error("contour touches candidate spectrum at diagonal index {index}; re-center or resize")]
    Ambiguous { index: usize },
    #[error("window encloses or touches 0, where the truncation has infinite multiplicity")]
    EnclosesZero,
    #[error("eigenvalue inclusion failed: {0}")]
    Eigenvalue(&'static str),
    #[error("invalid input: {0}")]
    Domain(String),
    #[error(transparent)]
    Linalg(LinalgError),
    #[error(transparent)]
    Gkw(#[from] GkwError),
    #[error(transparent)]
    Ball(#[from] BallError),
}

impl EngineError {
    pub fn gate(&self) -> Option<Gate> {
        match self {
            EngineError::Contour(_) => Some(Gate::Contour),
            EngineError::Beta(_) => Some(Gate::Beta),
            EngineError::Alpha(_) => Some(Gate::Alpha),
            EngineError::Theta(_) => Some(Gate::Theta),
            EngineError::Ambiguous { .. } | EngineError::EnclosesZero => Some(Gate::Multiplicity),
            EngineError::Eigenvalue(_) => Some(Gate::Eigenvalue),
            _ => None,
        }
    }
}

impl From<LinalgError> for EngineError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::ContourNotCertified { .. } => EngineError::Contour(e),
            LinalgError::Neumann(b) => EngineError::Beta(b),
            other => EngineError::Linalg(other),
        }
    }
}
