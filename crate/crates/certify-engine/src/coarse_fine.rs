//! Reuse of a coarse-level contour certificate at a finer truncation.

use ball_core::BallReal;
use validated_linalg::bound::one;

use crate::gates::{coarse_fine_propagate, lift_resolvent, projector_bound, small_gain};
use crate::window::EigenEnclosure;
use crate::EngineError;

/// Bounds transferred from level `K` to a finer level `K'` on the same contour.
#[derive(Clone, Debug)]
pub struct FineLevel {
    pub k_fine: usize,
    pub eps_fine: BallReal,
    /// `≥ sup_Γ ‖(zI − L)^{-1}‖`, from the coarse `M_{L_K}`.
    pub m_operator: BallReal,
    /// `≥ sup_Γ ‖(zI − L_{K'})^{-1}‖`.
    pub m_fine: BallReal,
    pub alpha_fine: BallReal,
    pub theta_fine: BallReal,
}

/// From the coarse `M_{L_K}` and `ε_K`, the operator bound `M/(1 − ε_K M)`,
/// then `M_{L_{K'}} ≤ M_L / (1 − ε_{K'} M_L)` and the fine projector error.
pub fn propagate_to_fine(
    coarse: &EigenEnclosure,
    k_fine: usize,
    eps_fine: &BallReal,
) -> Result<FineLevel, EngineError> {
    propagate_bounds(
        coarse.k,
        &coarse.m_lk,
        &coarse.eps_k,
        coarse.rho(),
        k_fine,
        eps_fine,
    )
}

/// [`propagate_to_fine`] from the stored coarse quantities alone.
pub fn propagate_bounds(
    k: usize,
    m_lk: &BallReal,
    eps_k: &BallReal,
    rho: &BallReal,
    k_fine: usize,
    eps_fine: &BallReal,
) -> Result<FineLevel, EngineError> {
    if k_fine < k {
        return Err(EngineError::Domain(format!(
            "fine level {k_fine} below coarse level {k}"
        )));
    }
    let m_operator = coarse_fine_propagate(m_lk, eps_k)?;
    let a = small_gain(eps_fine, &m_operator);
    let m_fine = lift_resolvent(&m_operator, &a)?;
    let alpha_fine = small_gain(eps_fine, &m_fine);
    if !(alpha_fine.mag_upper() < one()) {
        return Err(EngineError::Alpha(alpha_fine.upper_f64()));
    }
    let theta_fine = projector_bound(rho, eps_fine, &m_fine)?;
    Ok(FineLevel {
        k_fine,
        eps_fine: eps_fine.clone(),
        m_operator,
        m_fine,
        alpha_fine,
        theta_fine,
    })
}
