//! Finite-level Riesz projector error through Schur and reordering defects.

use ball_core::{BallFloat, BallReal, Mag};

use crate::bound::{ball_of_mag, neumann_factor, one};
use crate::contour::ContourCertificate;
use crate::ordschur::OrdschurCertificate;
use crate::schur::SchurCertificate;
use crate::LinalgError;

/// `ρ ‖F‖ M² / (1 − ‖F‖ M)`: the contour integral of a first-order resolvent
/// perturbation on a circle of radius `ρ`.
fn perturbation_term(rho: Mag, f: Mag, m: Mag, which: &'static str) -> Result<Mag, LinalgError> {
    let eta = f.mul_up(&m);
    let g = neumann_factor(eta).ok_or(LinalgError::Eta {
        which,
        eta: eta.to_f64_up(),
    })?;
    Ok(rho.mul_up(&f).mul_up(&m).mul_up(&m).mul_up(&g))
}

/// Bound on `‖P_A − W P_T̃ W^{-1}‖` for `W = Q Û`, where the projectors are
/// taken over the contour of `contour` (whose `M_T` refers to `T̃`).
///
/// The Schur term uses `F = Q^{-1}AQ − T` with `‖F‖ ≤ r_sch/√(1−δ)` and the
/// reordering term `G = Û^{-1}TÛ − T̃` with `‖G‖ ≤ normE_ord`; both projector
/// differences are conjugated back, hence the `κ(Q)` and `κ(Û)` factors.
/// Without `ord`, `Û = I`.
pub fn projector_error_decomposition<F: BallFloat>(
    schur: &SchurCertificate<F>,
    ord: Option<&OrdschurCertificate<F>>,
    contour: &ContourCertificate,
) -> Result<BallReal, LinalgError> {
    let rho = contour.rho_mag();
    let mt = contour.m_t_mag();
    let (kappa_u, term_ord, m_tri) = match ord {
        Some(o) => {
            let ku = o.kappa_u.mag_upper();
            let g = o.norm_e_ord.mag_upper();
            let eta = g.mul_up(&mt);
            let f = neumann_factor(eta).ok_or(LinalgError::Eta {
                which: "reordering",
                eta: eta.to_f64_up(),
            })?;
            // resolvent of T on the contour, through the reordering similarity
            let m_tri = ku.mul_up(&mt).mul_up(&f);
            (ku, perturbation_term(rho, g, mt, "reordering")?, m_tri)
        }
        None => (one(), Mag::ZERO, mt),
    };
    let term_sch = perturbation_term(rho, schur.similarity_defect(), m_tri, "Schur")?;
    let total = schur
        .kappa_mag()
        .mul_up(&term_sch.add_up(&kappa_u.mul_up(&term_ord)));
    Ok(ball_of_mag(total))
}
