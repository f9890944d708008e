//! Resolvent bound evaluators for the strong-weak setting.

use ball_core::{BallComplex, BallReal};

use crate::constants::DflyConstants;
use crate::{positive, upper_ball, DflyError, PREC};

fn one() -> BallReal {
    BallReal::from_f64(1.0, PREC)
}

/// `|z|` as a ball.
fn modulus(z: &BallComplex) -> BallReal {
    z.abs_ball(PREC)
}

/// If `|z| > a + b M_k δ_k`, then `z ∉ σ(L)` and
/// `R_s(z, L) ≤ (b M_k E_sw + 1)/(|z| − a − b M_k δ_k)`.
pub fn weak_to_strong(
    z: &BallComplex,
    c: &DflyConstants,
    mk_z: &BallReal,
) -> Result<BallReal, DflyError> {
    strong_from_weak(&modulus(z), c, mk_z)
}

fn strong_from_weak(
    abs_z: &BallReal,
    c: &DflyConstants,
    mk: &BallReal,
) -> Result<BallReal, DflyError> {
    let bm = c.b.mul(mk, PREC);
    let den = positive(
        "|z| > a + b M_k delta_k",
        &abs_z.sub(&c.a, PREC).sub(&bm.mul(&c.delta_k, PREC), PREC),
    )?;
    let num = bm.mul(&c.e_sw, PREC).add(&one(), PREC);
    Ok(upper_ball(&num.div(&den, PREC)?))
}

/// `‖R_{L_k}(z) − R_L(z)‖_{s→w} ≤ M_k δ_k K`.
pub fn rk_minus_r_bound(mk_z: &BallReal, delta_k: &BallReal, ks_z: &BallReal) -> BallReal {
    upper_ball(&mk_z.mul(delta_k, PREC).mul(ks_z, PREC))
}

/// Weak resolvent of the fine truncation from the true strong resolvent
/// `K ≥ R_s(z, L)` after `N` damping steps.
pub fn true_to_fine(
    z: &BallComplex,
    n: u64,
    c: &DflyConstants,
    k_z: &BallReal,
) -> Result<BallReal, DflyError> {
    if n == 0 {
        return Err(DflyError::Domain("N must be at least 1".into()));
    }
    let r = modulus(z);
    positive("|z| > a", &r.sub(&c.a, PREC))?;
    let ratio = c.m.div(&r, PREC)?;
    let mut s = BallReal::zero(PREC);
    for l in 0..n {
        s = s.add(&ratio.pow_u(l, PREC), PREC);
    }
    let s_n = s.div(&r, PREC)?;
    let zn = r.pow_u(n, PREC).inv(PREC)?;
    let damp = c.a.pow_u(n, PREC).mul(&c.e_kws, PREC).add(&c.b_n(n), PREC);
    let kd = zn.mul(k_z, PREC).mul(&damp, PREC);
    let beta = kd.mul(&c.delta_k, PREC);
    let den = positive("beta_N < 1", &one().sub(&beta, PREC))?;
    let num = s_n.add(&kd.mul(&c.e_sw, PREC), PREC);
    Ok(upper_ball(&num.div(&den, PREC)?))
}

/// Closed-form weak resolvent growth for `|z| ≥ μ` with `N = N_k`.
pub fn growth_bound(c: &DflyConstants, k_z: &BallReal) -> Result<BallReal, DflyError> {
    let q = c.q_bar()?;
    let cs = c.c_star()?;
    c.n_k()?;
    let lead = c.m.div(&c.mu, PREC)?.mul(&c.e_kws.pow(&q, PREC)?, PREC);
    let den = positive(
        "growth denominator",
        &one().sub(
            &lead.mul(&c.delta_k, PREC).mul(k_z, PREC).mul(&cs, PREC),
            PREC,
        ),
    )?;
    let tail = one()
        .div(&c.m.sub(&c.mu, PREC), PREC)?
        .add(&c.e_sw.mul(k_z, PREC).mul(&cs, PREC), PREC);
    Ok(upper_ball(&lead.div(&den, PREC)?.mul(&tail, PREC)))
}

/// Certified data of a closed curve: `inf |z|` and `sup R_w(z, L_k)`.
#[derive(Clone, Debug)]
pub struct CurveBound {
    pub inf_abs_z: BallReal,
    pub sup_weak_resolvent: BallReal,
}

/// Exclusion of a curve from `σ(L)` and the strong resolvent supremum on it.
pub fn dfly_exclusion(curve: &CurveBound, c: &DflyConstants) -> Result<BallReal, DflyError> {
    strong_from_weak(&curve.inf_abs_z, c, &curve.sup_weak_resolvent)
}
