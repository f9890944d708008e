//! Ball (midpoint–radius) arithmetic with a universal containment contract.
//!
//! Midpoints are generic over [`BallFloat`]: [`MpFloat`] (MPFR, any precision)
//! for certification and `f64` for hot sampling loops. Radii are [`Mag`]
//! values rounded upward.

pub mod ball;
pub mod complex;
pub mod error;
pub mod mag;
pub mod matrix;
pub mod scalar;
pub mod serial;

pub use ball::{Ball, BallF64, BallFloat, BallReal};
pub use complex::{BallComplex, BallComplexF64, ComplexBall};
pub use error::BallError;
pub use mag::Mag;
pub use matrix::{BallMatrix, FloatMatrix};
pub use scalar::{cabs, conj, Cplx, MpFloat, RealScalar};

/// Ball matrix at arbitrary precision.
pub type BallMatrixMp = BallMatrix<MpFloat>;
/// Ball matrix with double-precision midpoints.
pub type BallMatrixF64 = BallMatrix<f64>;
/// Candidate matrix at arbitrary precision.
pub type FloatMatrixMp = FloatMatrix<MpFloat>;
/// Candidate matrix in double precision.
pub type FloatMatrixF64 = FloatMatrix<f64>;

pub use rug;
