//! Hurwitz zeta `ζ(s, a) = Σ_{n≥0} (n+a)^{-s}` for real `s > 1`, `a > 0`.
//!
//! A prefix of `N = max(prec/2, 64)` terms is summed directly; the tail
//! `Σ_{n≥N}` is evaluated by Euler–Maclaurin at `x = N + a`. All even
//! derivatives of `x^{-s}` are positive, so the remainder after `M`
//! correction terms is bounded by the first omitted term.

use std::sync::{Mutex, OnceLock};

use ball_core::{BallReal, Mag};
use rug::{Integer, Rational};

use crate::error::GkwError;

/// `B_{2k}/(2k)!` for `k = 0, 1, ...`, extended on demand.
fn bernoulli_scaled(k: usize) -> Rational {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut c = cache.lock().expect("bernoulli cache poisoned");
    while c.len() <= k {
        // coefficients of x/(e^x − 1): Σ_{j≤n} c_j/(n+1−j)! = 0 for n ≥ 1,
        // with c_1 = −1/2 and odd c_j = 0 beyond it
        let n = 2 * c.len();
        let fact = |m: usize| Integer::from(Integer::factorial(m as u32));
        let mut acc = Rational::from((1, fact(n + 1)));
        acc -= Rational::from((1, fact(n))) / 2u32;
        for (i, cj) in c.iter().enumerate().skip(1) {
            acc += Rational::from(cj / fact(n + 1 - 2 * i));
        }
        c.push(-acc);
    }
    c[k].clone()
}

pub fn bernoulli_2k_over_fact(k: usize) -> Rational {
    bernoulli_scaled(k)
}

fn prefix_len(prec: u32) -> u64 {
    (prec as u64 / 2).max(64)
}

/// Shared Euler–Maclaurin tail from `x = N + a`, given `x^{-s}` and `x^{1-s}`.
fn em_tail(
    s: &BallReal,
    x: &BallReal,
    xs: &BallReal,
    x1s: &BallReal,
    scale: &Mag,
    wp: u32,
) -> Result<BallReal, GkwError> {
    let one = BallReal::from_f64(1.0, wp);
    let sm1 = s.sub(&one, wp);
    let mut tail = x1s.div(&sm1, wp)?.add(&xs.mul_2exp(-1, wp), wp);
    let inv_x2 = x.sqr(wp).inv(wp)?;
    // (s)_{2k-1} x^{-s-2k+1}, starting at k = 1: s · x^{-s-1}
    let mut poch_pow = s.mul(xs, wp).div(x, wp)?;
    let target = scale.mul_up(&Mag::pow2(-(wp as i64)));
    let kmax = 4 * wp as usize + 16;
    for k in 1..=kmax {
        let b = BallReal::from_rational(&bernoulli_scaled(k), wp);
        let term = b.mul(&poch_pow, wp);
        if term.mag_upper() <= target {
            return Ok(tail.inflate(term.mag_upper()));
        }
        tail = tail.add(&term, wp);
        // advance (s)_{2k-1} → (s)_{2k+1} and x^{-2}
        let f1 = s.add(&BallReal::from_i64(2 * k as i64 - 1, wp), wp);
        let f2 = s.add(&BallReal::from_i64(2 * k as i64, wp), wp);
        poch_pow = poch_pow.mul(&f1, wp).mul(&f2, wp).mul(&inv_x2, wp);
    }
    Err(GkwError::NoConvergence(kmax))
}

/// Certified enclosure of `ζ(s, a)`.
pub fn hurwitz_zeta(s: &BallReal, a: &BallReal, prec: u32) -> Result<BallReal, GkwError> {
    let wp = prec + 32;
    let one = BallReal::from_f64(1.0, wp);
    if !s.sub(&one, wp).is_positive() {
        return Err(GkwError::Domain("hurwitz_zeta needs s > 1"));
    }
    if !a.is_positive() {
        return Err(GkwError::Domain("hurwitz_zeta needs a > 0"));
    }
    let neg_s = s.neg();
    let n = prefix_len(prec);
    let mut sum = BallReal::zero(wp);
    for j in 0..n {
        let t = a.add(&BallReal::from_i64(j as i64, wp), wp);
        sum = sum.add(&t.pow(&neg_s, wp)?, wp);
    }
    let x = a.add(&BallReal::from_i64(n as i64, wp), wp);
    let xs = x.pow(&neg_s, wp)?;
    let x1s = xs.mul(&x, wp);
    let scale = sum.mag_lower();
    let tail = em_tail(s, &x, &xs, &x1s, &scale, wp)?;
    Ok(round_to(&sum.add(&tail, wp), prec))
}

/// `ζ(s, a)` for every integer `s` in `2..=smax` and a small integer shift `a`.
/// Entry `i` of the result is `ζ(i+2, a)`.
pub fn hurwitz_zeta_int_table(smax: u32, a: u32, prec: u32) -> Result<Vec<BallReal>, GkwError> {
    if smax < 2 || a == 0 {
        return Err(GkwError::Domain(
            "integer zeta table needs smax ≥ 2 and a ≥ 1",
        ));
    }
    let wp = prec + 32;
    let n = prefix_len(prec);
    let count = (smax - 1) as usize;
    let mut sums = vec![BallReal::zero(wp); count];
    for j in 0..n {
        let inv = BallReal::from_ratio(1, (a as u64 + j) as i64, wp)?;
        let mut p = inv.sqr(wp);
        for s in sums.iter_mut() {
            *s = s.add(&p, wp);
            p = p.mul(&inv, wp);
        }
    }
    let x = BallReal::from_i64((a as u64 + n) as i64, wp);
    let inv_x = x.inv(wp)?;
    let mut x1s = inv_x.clone();
    let mut out = Vec::with_capacity(count);
    for (i, sum) in sums.into_iter().enumerate() {
        let s = BallReal::from_i64(i as i64 + 2, wp);
        let xs = x1s.mul(&inv_x, wp);
        let tail = em_tail(&s, &x, &xs, &x1s, &sum.mag_lower(), wp)?;
        out.push(round_to(&sum.add(&tail, wp), prec));
        x1s = xs;
    }
    Ok(out)
}

fn round_to(b: &BallReal, prec: u32) -> BallReal {
    b.add(&BallReal::zero(prec), prec)
}
