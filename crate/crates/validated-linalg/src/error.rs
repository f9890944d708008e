use ball_core::BallError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("QR iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("candidate {what} too far from unitary (defect {delta:.3e})")]
    NotUnitary { what: &'static str, delta: f64 },
    #[error("contour not certified: sample {index} gives s* = {s_star:.3e}")]
    ContourNotCertified { index: usize, s_star: f64 },
    #[error("Neumann condition failed: beta = {0:.3e}")]
    Neumann(f64),
    #[error("{which} small-gain condition failed: eta = {eta:.3e}")]
    Eta { which: &'static str, eta: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Ball(#[from] BallError),
}
