//! Scalar bound helpers: certified magnitudes stored as exact balls.

use ball_core::scalar::float_of_mag;
use ball_core::{BallReal, Mag, MpFloat};

/// Exact ball at the value of a magnitude.
pub fn ball_of_mag(m: Mag) -> BallReal {
    BallReal::exact(MpFloat(float_of_mag(&m)))
}

/// Upper bound of `1/(1 − x)` given an upper bound `x < 1`; `None` otherwise.
pub fn neumann_factor(x: Mag) -> Option<Mag> {
    let d = Mag::from_f64(1.0).sub_down(&x);
    if d.is_zero() {
        None
    } else {
        Some(Mag::from_f64(1.0).div_up(&d))
    }
}

pub fn one() -> Mag {
    Mag::from_f64(1.0)
}
