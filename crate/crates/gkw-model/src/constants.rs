//! Analytic constants: the bound `C₂` on the operator as a map from the unit
//! Hardy space into the one on the disc of radius 3/2, truncation budgets, and
//! the refined norm bound.

use ball_core::BallReal;

use crate::error::GkwError;
use crate::zeta::hurwitz_zeta;

/// Split index giving the tightest tabulated `C₂`.
pub const C2_DEFAULT_SPLIT: u64 = 10_000;

/// Upper bound `Σ_{n<N} √(2n+1)/(n−½)² + √(2+2/(N−½)) ζ(3/2, N−½)`.
pub fn c2_bound(n_split: u64, prec: u32) -> Result<BallReal, GkwError> {
    if n_split == 0 {
        return Err(GkwError::Domain("c2_bound needs N ≥ 1"));
    }
    let wp = prec + 16;
    let half = BallReal::from_f64(0.5, wp);
    let mut sum = BallReal::zero(wp);
    for n in 1..n_split {
        let num = BallReal::from_i64(2 * n as i64 + 1, wp).sqrt(wp)?;
        let d = BallReal::from_i64(n as i64, wp).sub(&half, wp);
        sum = sum.add(&num.div(&d.sqr(wp), wp)?, wp);
    }
    let a = BallReal::from_i64(n_split as i64, wp).sub(&half, wp);
    let w = BallReal::from_f64(2.0, wp)
        .add(&BallReal::from_f64(2.0, wp).div(&a, wp)?, wp)
        .sqrt(wp)?;
    let z = hurwitz_zeta(&BallReal::from_f64(1.5, wp), &a, wp)?;
    Ok(sum.add(&w.mul(&z, wp), prec))
}

/// `C₂` at the default split, evaluated once per precision.
pub fn c2_default(prec: u32) -> Result<BallReal, GkwError> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<u32, BallReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("c2 cache").get(&prec) {
        return Ok(v.clone());
    }
    let v = c2_bound(C2_DEFAULT_SPLIT, prec)?;
    cache.lock().expect("c2 cache").insert(prec, v.clone());
    Ok(v)
}

/// Operator error of the degree-`K` truncation, `‖L − L_K‖ ≤ C₂ (2/3)^{K+1}`.
#[derive(Clone, Debug)]
pub struct TruncationBudget {
    pub k: usize,
    pub c2: BallReal,
    pub eps_k: BallReal,
}

impl TruncationBudget {
    /// Upper bound of `ε_K` as an exact ball.
    pub fn eps_upper(&self) -> BallReal {
        upper_ball(&self.eps_k)
    }
}

/// `(2/3)^m` as a ball.
pub fn two_thirds_pow(m: u64, prec: u32) -> BallReal {
    let t = BallReal::from_ratio(2, 3, prec + 16).expect("nonzero denominator");
    t.pow_u(m, prec)
}

pub fn truncation_budget(k: usize, c2: &BallReal) -> TruncationBudget {
    let prec = c2.prec().max(64);
    let eps = c2.mul(&two_thirds_pow(k as u64 + 1, prec), prec);
    TruncationBudget {
        k,
        c2: c2.clone(),
        eps_k: eps,
    }
}

/// `‖L‖ ≤ ‖L_K‖ / (1 − (2/3)^{K+1})`.
pub fn refine_operator_norm(norm_lk: &BallReal, k: usize) -> BallReal {
    let prec = norm_lk.prec().max(64);
    let d = BallReal::from_f64(1.0, prec).sub(&two_thirds_pow(k as u64 + 1, prec), prec);
    upper_ball(&norm_lk.div(&d, prec).expect("1 − (2/3)^{K+1} > 0"))
}

/// Exact ball at the upper endpoint of `b`.
pub fn upper_ball(b: &BallReal) -> BallReal {
    let (_, hi) = b.endpoints(b.prec().max(64));
    BallReal::from_float(hi)
}

/// Default precision schedule `max(128, 4K)` bits.
pub fn default_precision(k: usize) -> u32 {
    (4 * k as u32).max(128)
}
