//! Spectral expansion of `L^n 1` from certified eigen-windows: dual
//! coefficients, tail remainder, integrated expansion and the Gauss–Kuzmin
//! distribution error.

pub mod error;
pub mod expansion;
pub mod mode;

use ball_core::{BallReal, Mag};

pub use error::ExpansionError;
pub use expansion::{
    expansion_eval, gauss_kuzmin_error, monomial_integrals, qnorm_bound, tail_bound,
    tail_bound_from, to_csv, ExpansionCertificate, ExpansionPoint,
};
pub use mode::{spectral_coefficient, Mode};

/// Exact ball at an upper magnitude.
pub(crate) fn upper(m: Mag) -> BallReal {
    BallReal::from_float(ball_core::scalar::float_of_mag(&m))
}
