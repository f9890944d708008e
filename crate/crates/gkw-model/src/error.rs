use ball_core::BallError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GkwError {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("precision exhausted: entry radius {radius:e} exceeds 2^-{half} at {prec} bits")]
    PrecisionExhausted { radius: f64, half: u32, prec: u32 },
    #[error("Euler-Maclaurin series did not converge within {0} terms")]
    NoConvergence(usize),
    #[error("branch geometry violated at w = {w}, n = {n}: {what}")]
    GeometryViolation {
        w: String,
        n: u32,
        what: &'static str,
    },
    #[error("malformed matrix file: {0}")]
    Format(String),
    #[error(transparent)]
    Ball(#[from] BallError),
}
