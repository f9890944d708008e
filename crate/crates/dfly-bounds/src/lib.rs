//! Strong-weak (DFLY) resolvent bounds and a synthetic two-norm harness.
//!
//! The evaluators take ball inputs and return upper bounds as exact balls
//! (zero radius, midpoint rounded up). Strict conditions are checked on the
//! lower endpoint of the slack and reported as [`DflyError::Condition`].

pub mod bounds;
pub mod constants;
pub mod error;
pub mod suite;
pub mod synthetic;

use ball_core::{BallReal, MpFloat};

pub use bounds::{
    dfly_exclusion, growth_bound, rk_minus_r_bound, true_to_fine, weak_to_strong, CurveBound,
};
pub use constants::{dfly_iterate, DflyConstants};
pub use error::DflyError;
pub use suite::{dfly_convergence_suite, SuiteReport, SuiteRow};
pub use synthetic::{default_family, TwoNormExample};

/// Working precision of the evaluators.
pub const PREC: u32 = 128;

/// `x` if certified positive, otherwise a condition failure.
pub(crate) fn positive(what: &'static str, x: &BallReal) -> Result<BallReal, DflyError> {
    if x.is_positive() {
        Ok(x.clone())
    } else {
        Err(DflyError::Condition {
            what,
            margin: x.mid_f64(),
        })
    }
}

/// Exact ball at the upper endpoint of `x`.
pub(crate) fn upper_ball(x: &BallReal) -> BallReal {
    let (_, hi) = x.endpoints(PREC);
    BallReal::exact(MpFloat(hi))
}
