//! Scalar inequalities of the certification chain. Inputs are read as upper
//! bounds; outputs are exact balls at certified upper bounds.

use ball_core::{BallComplex, BallReal, Mag};
use validated_linalg::bound::{ball_of_mag, neumann_factor, one};

use crate::EngineError;

fn up(b: &BallReal) -> Mag {
    b.mag_upper()
}

/// `α = ε·M`.
pub fn small_gain(eps: &BallReal, m: &BallReal) -> BallReal {
    ball_of_mag(up(eps).mul_up(&up(m)))
}

/// `M/(1 − α)`.
pub fn lift_resolvent(m: &BallReal, alpha: &BallReal) -> Result<BallReal, EngineError> {
    let f = neumann_factor(up(alpha)).ok_or(EngineError::Alpha(alpha.upper_f64()))?;
    Ok(ball_of_mag(up(m).mul_up(&f)))
}

/// `ϑ = ρ ε M² / (1 − εM)` for a circle of radius `ρ`.
pub fn projector_bound(
    rho: &BallReal,
    eps: &BallReal,
    m: &BallReal,
) -> Result<BallReal, EngineError> {
    let alpha = up(eps).mul_up(&up(m));
    let f = neumann_factor(alpha).ok_or(EngineError::Alpha(alpha.to_f64_up()))?;
    Ok(ball_of_mag(
        up(rho)
            .mul_up(&up(eps))
            .mul_up(&up(m))
            .mul_up(&up(m))
            .mul_up(&f),
    ))
}

/// Radius `(ε(1+ϑ) + 2Cϑ)/(1−ϑ)` by which the finite eigenvalue is widened.
pub fn eigenvalue_radius(
    eps: &BallReal,
    c: &BallReal,
    theta: &BallReal,
) -> Result<Mag, EngineError> {
    let th = up(theta);
    let f = neumann_factor(th).ok_or(EngineError::Theta(theta.upper_f64()))?;
    let num = up(eps)
        .mul_up(&one().add_up(&th))
        .add_up(&up(c).mul_up(&th).mul_2exp(1));
    Ok(num.mul_up(&f))
}

pub fn eigenvalue_enclosure(
    lambda_k: &BallComplex,
    eps: &BallReal,
    c: &BallReal,
    theta: &BallReal,
) -> Result<BallComplex, EngineError> {
    Ok(lambda_k.inflate(eigenvalue_radius(eps, c, theta)?))
}

/// `2ϑ/(1−ϑ)`.
pub fn eigenvector_bound(theta: &BallReal) -> Result<BallReal, EngineError> {
    let th = up(theta);
    let f = neumann_factor(th).ok_or(EngineError::Theta(theta.upper_f64()))?;
    Ok(ball_of_mag(th.mul_2exp(1).mul_up(&f)))
}

/// `M' = M/(1 − εM)`: a resolvent bound at level `K` transferred to the
/// operator itself.
pub fn coarse_fine_propagate(m: &BallReal, eps: &BallReal) -> Result<BallReal, EngineError> {
    lift_resolvent(m, &small_gain(eps, m))
}

/// `σ_max` of `[[a, a·b/m0], [0, 1/m0]]`, bounding the resolvent of the
/// one-sided truncation `[[A, B], [0, 0]]` when `a ≥ ‖(z−A)^{-1}‖`,
/// `b ≥ ‖B‖` and `m0 ≤ |z|` on the contour.
pub fn one_sided_resolvent(a: Mag, b: Mag, m0: Mag) -> Result<Mag, EngineError> {
    if m0.is_zero() {
        return Err(EngineError::EnclosesZero);
    }
    let inv = one().div_up(&m0);
    let q = a.mul_up(&b).mul_up(&inv);
    let (pp, qq, rr) = (a.mul_up(&a), q.mul_up(&q), inv.mul_up(&inv));
    let s = pp.add_up(&qq).add_up(&rr);
    let det2 = a
        .mul_down(&a)
        .mul_down(&one().div_down(&m0.mul_up(&m0)))
        .mul_2exp(2);
    let root = s.mul_up(&s).sub_up(&det2).sqrt_up();
    Ok(s.add_up(&root).mul_2exp(-1).sqrt_up())
}
