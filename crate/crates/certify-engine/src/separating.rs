//! Circles around the origin that separate a leading part of the spectrum.

use ball_core::{Ball, BallComplex, BallMatrix, BallReal, MpFloat};
use validated_linalg::bound::{ball_of_mag, one};
use validated_linalg::{certify_schur, ContourCertificate, SamplingMode};

use crate::context::{OperatorContext, Policy, WindowSpec};
use crate::gates::{lift_resolvent, one_sided_resolvent, projector_bound, small_gain};
use crate::window::{circle_offset, contour_with_doubling};
use crate::EngineError;

/// Resolvent data on `|z| = ρ` and the certified number of eigenvalues of `L`
/// outside it.
#[derive(Clone, Debug)]
pub struct SeparatingCircle {
    pub rho: BallReal,
    /// `≥ sup ‖(zI − L_K)^{-1}‖` on the circle.
    pub m_lk: BallReal,
    pub alpha: BallReal,
    /// `≥ sup ‖(zI − L)^{-1}‖` on the circle.
    pub m_inf: BallReal,
    /// `≥ ‖P_in(L) − P_in(L_K)‖`.
    pub theta: BallReal,
    /// Eigenvalues (with multiplicity) of `L` outside the circle.
    pub outside: usize,
    pub contour: ContourCertificate,
}

/// Certify the circle `|z| = ρ`. The one-sided truncation has `0` in its
/// spectrum, so the count is made outside: the complementary projectors of
/// `L` and `L_K` differ by `ϑ < 1` and then have equal rank.
pub fn certify_separating_circle(
    ctx: &OperatorContext,
    rho: f64,
    policy: &Policy,
) -> Result<SeparatingCircle, EngineError> {
    let (q, t) = &*ctx.schur;
    let cert = certify_schur(&ctx.a, q, t)?;
    let spec = WindowSpec {
        index: None,
        center: BallComplex::zero(ctx.prec),
        rho: BallReal::from_f64(rho, 128),
        m: policy.m,
        max_m: policy.max_m,
        mode: SamplingMode::Full,
    };
    let tb = BallMatrix::from_float(&cert.t);
    let contour = contour_with_doubling(&tb, &spec, SamplingMode::Full)?;
    let lifted = validated_linalg::lift_to_matrix_resolvent(&cert, &contour)?;
    let m_a = lifted.m_a.clone().expect("populated by lift");
    let m_lk = match &ctx.coupling {
        Some(b) => ball_of_mag(one_sided_resolvent(
            m_a.mag_upper(),
            b.mag_upper(),
            lifted.min_abs_z.mag_lower(),
        )?),
        None => m_a,
    };
    let alpha = small_gain(&ctx.eps_k, &m_lk);
    if !(alpha.mag_upper() < one()) {
        return Err(EngineError::Alpha(alpha.upper_f64()));
    }
    let m_inf = lift_resolvent(&m_lk, &alpha)?;
    let theta = projector_bound(&lifted.rho, &ctx.eps_k, &m_lk)?;
    if !(theta.mag_upper() < one()) {
        return Err(EngineError::Theta(theta.upper_f64()));
    }
    let g = cert.similarity_defect();
    if !(g.mul_up(&lifted.m_t_mag()) < one()) {
        return Err(EngineError::Beta(g.mul_up(&lifted.m_t_mag()).to_f64_up()));
    }
    let gb = Ball::exact(MpFloat(ball_core::scalar::float_of_mag(&g)));
    let mut outside = 0;
    for i in 0..cert.t.rows() {
        let off = circle_offset(&cert.t[(i, i)], &lifted.center, &lifted.rho);
        if off.abs().mag_lower() <= gb.mag_upper() {
            return Err(EngineError::Ambiguous { index: i });
        }
        if off.is_positive() {
            outside += 1;
        }
    }
    Ok(SeparatingCircle {
        rho: lifted.rho.clone(),
        m_lk,
        alpha,
        m_inf,
        theta,
        outside,
        contour: lifted,
    })
}
