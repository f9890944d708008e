//! Real midpoint–radius balls, generic over the midpoint backend.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::AddAssignRound;
use rug::Float;

use crate::error::BallError;
use crate::mag::Mag;
use crate::matrix::{matmul_f64, matmul_generic, BallMatrix};
use crate::scalar::{float_of_mag, mag_of_float_down, mag_of_float_up, MpFloat, RealScalar};

/// Midpoint type of a ball: a [`RealScalar`] whose basic operations report a
/// rigorous bound on their own rounding error.
pub trait BallFloat: RealScalar {
    fn add_err(&self, o: &Self, prec: u32) -> (Self, Mag);
    fn sub_err(&self, o: &Self, prec: u32) -> (Self, Mag);
    fn mul_err(&self, o: &Self, prec: u32) -> (Self, Mag);
    fn div_err(&self, o: &Self, prec: u32) -> (Self, Mag);
    fn sqrt_err(&self, prec: u32) -> (Self, Mag);
    /// `acc += a·b` in place; returns the rounding error committed.
    fn fma_acc(acc: &mut Self, a: &Self, b: &Self, prec: u32) -> Mag;
    /// Lower bound on `|self|`.
    fn mag_lower(&self) -> Mag;
    /// Exact conversion of a magnitude (or `+inf`) into this type, rounded up.
    fn from_mag_up(m: &Mag, prec: u32) -> Self;
    fn zero_at(prec: u32) -> Self;
    fn to_f64_up(&self) -> f64;
    /// Exact conversion into an arbitrary-precision float.
    fn to_mp(&self) -> MpFloat;
    /// Ball matrix product; backends may override with a faster kernel.
    fn ball_matmul(a: &BallMatrix<Self>, b: &BallMatrix<Self>, prec: u32) -> BallMatrix<Self> {
        matmul_generic(a, b, prec)
    }
}

fn ulp_err(x: &Float, ord: Ordering) -> Mag {
    if ord == Ordering::Equal || x.is_zero() {
        return Mag::ZERO;
    }
    match x.get_exp() {
        // |x| < 2^e, one ulp is 2^(e-prec); nearest rounding is within that
        Some(e) => Mag::pow2(e as i64 - x.prec() as i64),
        None => Mag::INF,
    }
}

impl BallFloat for MpFloat {
    fn add_err(&self, o: &Self, prec: u32) -> (Self, Mag) {
        let (r, ord) = Float::with_val_round(prec, &self.0 + &o.0, Round::Nearest);
        let e = ulp_err(&r, ord);
        (MpFloat(r), e)
    }
    fn sub_err(&self, o: &Self, prec: u32) -> (Self, Mag) {
        let (r, ord) = Float::with_val_round(prec, &self.0 - &o.0, Round::Nearest);
        let e = ulp_err(&r, ord);
        (MpFloat(r), e)
    }
    fn mul_err(&self, o: &Self, prec: u32) -> (Self, Mag) {
        let (r, ord) = Float::with_val_round(prec, &self.0 * &o.0, Round::Nearest);
        let e = ulp_err(&r, ord);
        (MpFloat(r), e)
    }
    fn div_err(&self, o: &Self, prec: u32) -> (Self, Mag) {
        let (r, ord) = Float::with_val_round(prec, &self.0 / &o.0, Round::Nearest);
        let e = ulp_err(&r, ord);
        (MpFloat(r), e)
    }
    fn sqrt_err(&self, prec: u32) -> (Self, Mag) {
        let (r, ord) = Float::with_val_round(prec, self.0.sqrt_ref(), Round::Nearest);
        let e = ulp_err(&r, ord);
        (MpFloat(r), e)
    }
    fn fma_acc(acc: &mut Self, a: &Self, b: &Self, _prec: u32) -> Mag {
        let ord = acc.0.add_assign_round(&a.0 * &b.0, Round::Nearest);
        ulp_err(&acc.0, ord)
    }
    fn mag_lower(&self) -> Mag {
        mag_of_float_down(&self.0)
    }
    fn from_mag_up(m: &Mag, prec: u32) -> Self {
        let f = float_of_mag(m);
        MpFloat(Float::with_val_round(prec.max(64), &f, Round::Up).0)
    }
    fn zero_at(prec: u32) -> Self {
        MpFloat(Float::new(prec))
    }
    fn to_f64_up(&self) -> f64 {
        self.0.to_f64_round(Round::Up)
    }
    fn to_mp(&self) -> MpFloat {
        self.clone()
    }
}

/// Smallest positive subnormal, used to absorb underflow in `f64` error terms.
const ETA: f64 = 5e-324;

impl BallFloat for f64 {
    fn add_err(&self, o: &Self, _prec: u32) -> (Self, Mag) {
        let s = self + o;
        let bb = s - self;
        let e = (self - (s - bb)) + (o - bb);
        if !s.is_finite() {
            return (0.0, Mag::INF);
        }
        (s, Mag::from_f64(e))
    }
    fn sub_err(&self, o: &Self, p: u32) -> (Self, Mag) {
        self.add_err(&-o, p)
    }
    fn mul_err(&self, o: &Self, _prec: u32) -> (Self, Mag) {
        let p = self * o;
        if !p.is_finite() {
            return (0.0, Mag::INF);
        }
        let e = self.mul_add(*o, -p);
        // fma residual is exact unless the product underflows
        (p, Mag::from_f64(e).add_up(&Mag::from_f64(ETA)))
    }
    fn div_err(&self, o: &Self, _prec: u32) -> (Self, Mag) {
        let q = self / o;
        if !q.is_finite() {
            return (0.0, Mag::INF);
        }
        // |a/b − q| = |a − q b| / |b|, numerator bounded by |fma| + η
        let r = Mag::from_f64(q.mul_add(*o, -self)).add_up(&Mag::from_f64(ETA));
        (q, r.div_up(&Mag::from_f64(*o)).add_up(&Mag::from_f64(ETA)))
    }
    fn sqrt_err(&self, _prec: u32) -> (Self, Mag) {
        let r = self.sqrt();
        if r == 0.0 {
            return (0.0, Mag::ZERO);
        }
        // |√x − r| = |x − r²| / (√x + r) ≤ |x − r²| / r
        let d = Mag::from_f64(r.mul_add(r, -self)).add_up(&Mag::from_f64(ETA));
        (r, d.div_up(&Mag::from_f64(r)))
    }
    fn fma_acc(acc: &mut Self, a: &Self, b: &Self, p: u32) -> Mag {
        let (prod, e1) = a.mul_err(b, p);
        let (s, e2) = acc.add_err(&prod, p);
        *acc = s;
        e1.add_up(&e2)
    }
    fn mag_lower(&self) -> Mag {
        Mag::from_f64(*self)
    }
    fn from_mag_up(m: &Mag, _prec: u32) -> Self {
        m.to_f64_up()
    }
    fn zero_at(_prec: u32) -> Self {
        0.0
    }
    fn to_f64_up(&self) -> f64 {
        *self
    }
    fn to_mp(&self) -> MpFloat {
        MpFloat(Float::with_val(53, *self))
    }
    fn ball_matmul(a: &BallMatrix<Self>, b: &BallMatrix<Self>, _prec: u32) -> BallMatrix<Self> {
        matmul_f64(a, b)
    }
}

/// Closed real interval `[mid − rad, mid + rad]`.
#[derive(Clone, PartialEq)]
pub struct Ball<F: BallFloat> {
    mid: F,
    rad: Mag,
}

impl<F: BallFloat> Ball<F> {
    pub fn new(mid: F, rad: Mag) -> Self {
        if !mid.is_finite() {
            return Ball {
                mid: F::zero_at(mid.prec()),
                rad: Mag::INF,
            };
        }
        Ball { mid, rad }
    }

    pub fn exact(mid: F) -> Self {
        Ball::new(mid, Mag::ZERO)
    }

    pub fn zero(prec: u32) -> Self {
        Ball::exact(F::zero_at(prec))
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        Ball::exact(F::from_f64_prec(x, prec))
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        let f = x as f64;
        if f as i64 == x && f.abs() < 9.0e15 {
            return Ball::from_f64(f, prec);
        }
        let hi = (x >> 26) as f64 * 67108864.0;
        let lo = (x & ((1 << 26) - 1)) as f64;
        Ball::from_f64(hi, prec).add(&Ball::from_f64(lo, prec), prec)
    }

    /// Exact ratio `p/q` enclosed at `prec` bits.
    pub fn from_ratio(p: i64, q: i64, prec: u32) -> Result<Self, BallError> {
        Ball::from_i64(p, prec).div(&Ball::from_i64(q, prec), prec)
    }

    pub fn mid(&self) -> &F {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn into_parts(self) -> (F, Mag) {
        (self.mid, self.rad)
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn is_finite(&self) -> bool {
        self.rad.is_finite() && self.mid.is_finite()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Add `r` to the radius.
    pub fn inflate(&self, r: Mag) -> Self {
        Ball {
            mid: self.mid.clone(),
            rad: self.rad.add_up(&r),
        }
    }

    /// Upper bound on `|x|` over the ball.
    pub fn mag_upper(&self) -> Mag {
        self.mid.mag().add_up(&self.rad)
    }

    /// Lower bound on `|x|` over the ball (0 if the ball contains 0).
    pub fn mag_lower(&self) -> Mag {
        self.mid.mag_lower().sub_down(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.mag_lower() <= self.rad
    }

    /// Certainly positive.
    pub fn is_positive(&self) -> bool {
        self.mid > F::zero() && !self.contains_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mid < F::zero() && !self.contains_zero()
    }

    /// Upper endpoint as an `f64` (rounded up).
    pub fn upper_f64(&self) -> f64 {
        let a = self.mid.to_f64_up();
        let b = self.rad.to_f64_up();
        let s = a + b;
        if !s.is_finite() {
            return f64::INFINITY;
        }
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        if err > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    /// Lower endpoint as an `f64` (rounded down).
    pub fn lower_f64(&self) -> f64 {
        -self.neg().upper_f64()
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn neg(&self) -> Self {
        Ball {
            mid: -self.mid.clone(),
            rad: self.rad,
        }
    }

    pub fn abs(&self) -> Self {
        if self.contains_zero() {
            let m = F::zero_at(self.prec());
            Ball::new(m, self.mag_upper())
        } else {
            Ball {
                mid: self.mid.abs(),
                rad: self.rad,
            }
        }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        let (m, e) = self.mid.add_err(&o.mid, prec);
        Ball::new(m, self.rad.add_up(&o.rad).add_up(&e))
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        let (m, e) = self.mid.sub_err(&o.mid, prec);
        Ball::new(m, self.rad.add_up(&o.rad).add_up(&e))
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let (m, e) = self.mid.mul_err(&o.mid, prec);
        let r = self
            .mid
            .mag()
            .mul_up(&o.rad)
            .add_up(&o.mid.mag().mul_up(&self.rad))
            .add_up(&self.rad.mul_up(&o.rad))
            .add_up(&e);
        Ball::new(m, r)
    }

    pub fn sqr(&self, prec: u32) -> Self {
        if self.contains_zero() {
            // [0, u²] as a ball centred at u²/2
            let u = self.mag_upper();
            let h = u.mul_up(&u).mul_2exp(-1);
            let m = F::from_mag_up(&h, prec);
            let r = m.mag();
            return Ball::new(m, r);
        }
        self.mul(self, prec)
    }

    pub fn mul_f64(&self, x: f64, prec: u32) -> Self {
        self.mul(&Ball::from_f64(x, prec), prec)
    }

    /// Multiply by `2^k` (exact).
    pub fn mul_2exp(&self, k: i32, prec: u32) -> Self {
        let two = if k >= 0 {
            Ball::<F>::from_f64(2f64.powi(k.min(1000)), prec)
        } else {
            Ball::<F>::from_f64(0.5f64.powi((-k).min(1000)), prec)
        };
        self.mul(&two, prec)
    }

    pub fn div(&self, o: &Self, prec: u32) -> Result<Self, BallError> {
        let ym = o.mid.mag_lower();
        if ym <= o.rad {
            return Err(BallError::Indeterminate("division by a ball containing 0"));
        }
        let (m, e) = self.mid.div_err(&o.mid, prec);
        // |x/y − xm/ym| ≤ (|xm|·ry + |ym|·rx) / (|ym|·(|ym| − ry))
        let num = self
            .mid
            .mag()
            .mul_up(&o.rad)
            .add_up(&o.mid.mag().mul_up(&self.rad));
        let den = ym.mul_down(&ym.sub_down(&o.rad));
        let r = if num.is_zero() {
            Mag::ZERO
        } else {
            num.div_up(&den)
        };
        Ok(Ball::new(m, r.add_up(&e)))
    }

    pub fn inv(&self, prec: u32) -> Result<Self, BallError> {
        Ball::from_f64(1.0, prec).div(self, prec)
    }

    pub fn sqrt(&self, prec: u32) -> Result<Self, BallError> {
        if self.mid < F::zero() && !self.contains_zero() {
            return Err(BallError::Indeterminate("sqrt of a negative ball"));
        }
        let lo = self.mid.mag_lower().sub_down(&self.rad);
        if lo.is_zero() {
            // ball reaches 0: enclose [0, √(m+r)]
            if self.mid < F::zero() && self.contains_zero() && self.mid.mag() > self.rad {
                return Err(BallError::Indeterminate("sqrt of a negative ball"));
            }
            let u = self.mag_upper().sqrt_up();
            let h = u.mul_2exp(-1);
            return Ok(Ball::new(
                F::from_mag_up(&h, prec),
                h.mul_up(&Mag::from_f64(1.0 + 1e-15)),
            ));
        }
        let (m, e) = self.mid.sqrt_err(prec);
        // |√x − √m| ≤ r / (√(m−r) + √m) ≤ r / √(m−r)
        let r = if self.rad.is_zero() {
            Mag::ZERO
        } else {
            self.rad.div_up(&lo.sqrt_down())
        };
        Ok(Ball::new(m, r.add_up(&e)))
    }

    pub fn pow_u(&self, mut n: u64, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Ball::from_f64(1.0, prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr(prec);
            }
        }
        acc
    }

    /// Certified `self < o`.
    pub fn lt(&self, o: &Self) -> bool {
        o.sub(self, self.prec().max(o.prec())).is_positive()
    }

    /// A ball containing both `self` and `o`, centred at `self`.
    pub fn hull(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec()) + 64;
        let d = Ball::exact(self.mid.clone()).sub(&Ball::exact(o.mid.clone()), p);
        let r = d.mag_upper().add_up(&o.rad).max(self.rad);
        Ball {
            mid: self.mid.clone(),
            rad: r,
        }
    }

    /// A ball whose upper endpoint dominates both upper endpoints.
    pub fn max_upper(&self, o: &Self) -> Self {
        if self.lt(o) {
            o.clone()
        } else if o.lt(self) {
            self.clone()
        } else {
            self.hull(o)
        }
    }

    /// Does this ball contain every point of `o`?
    pub fn contains(&self, o: &Self) -> bool {
        let p = self.prec().max(o.prec()) + 64;
        let d = Ball::exact(self.mid.clone()).sub(&Ball::exact(o.mid.clone()), p);
        // |ms − mo| + ro ≤ rs
        let need = d.mag_upper().add_up(&o.rad);
        need <= self.rad
    }

    /// Does the ball contain the exact value `x`?
    pub fn contains_f64(&self, x: f64) -> bool {
        self.contains(&Ball::from_f64(x, self.prec()))
    }

    /// Do the two balls intersect?
    /// The same ball with an arbitrary-precision midpoint.
    pub fn to_real(&self) -> BallReal {
        Ball {
            mid: self.mid.to_mp(),
            rad: self.rad,
        }
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        let p = self.prec().max(o.prec()) + 64;
        let d = Ball::exact(self.mid.clone()).sub(&Ball::exact(o.mid.clone()), p);
        d.mid.mag_lower().sub_down(&d.rad) <= self.rad.add_up(&o.rad)
    }
}

impl<F: BallFloat> fmt::Debug for Ball<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} +/- {}]", self.mid, self.rad)
    }
}

/// Arbitrary-precision real ball.
pub type BallReal = Ball<MpFloat>;
/// Double-precision real ball (fast path for sampling loops).
pub type BallF64 = Ball<f64>;

impl From<&BallF64> for BallReal {
    fn from(b: &BallF64) -> Self {
        Ball::new(MpFloat(Float::with_val(64, *b.mid())), b.rad())
    }
}

impl BallReal {
    pub fn from_float(f: Float) -> Self {
        Ball::exact(MpFloat(f))
    }

    pub fn from_rational(q: &rug::Rational, prec: u32) -> Self {
        let (f, ord) = Float::with_val_round(prec, q, Round::Nearest);
        let e = ulp_err(&f, ord);
        Ball::new(MpFloat(f), e)
    }

    pub fn from_integer(n: &rug::Integer, prec: u32) -> Self {
        let (f, ord) = Float::with_val_round(prec, n, Round::Nearest);
        let e = ulp_err(&f, ord);
        Ball::new(MpFloat(f), e)
    }

    /// Enclosure of the interval `[lo, hi]` at `prec` bits.
    pub fn from_interval(lo: &Float, hi: &Float, prec: u32) -> Self {
        let (mid, _) = Float::with_val_round(prec, lo + hi, Round::Nearest);
        let mid = mid / 2u32;
        let (dh, _) = Float::with_val_round(64, hi - &mid, Round::Up);
        let (dl, _) = Float::with_val_round(64, &mid - lo, Round::Up);
        let r = mag_of_float_up(&dh).max(mag_of_float_up(&dl));
        Ball::new(MpFloat(mid), r)
    }

    /// Lower and upper endpoints as floats rounded outward at `prec` bits.
    pub fn endpoints(&self, prec: u32) -> (Float, Float) {
        let r = float_of_mag(&self.rad);
        let (lo, _) = Float::with_val_round(prec, &self.mid.0 - &r, Round::Down);
        let (hi, _) = Float::with_val_round(prec, &self.mid.0 + &r, Round::Up);
        (lo, hi)
    }

    /// Convert to a double-precision ball, absorbing the conversion error.
    pub fn to_f64_ball(&self) -> BallF64 {
        let m = self.mid.0.to_f64();
        let (d, _) = Float::with_val_round(64, &self.mid.0 - m, Round::Up);
        Ball::new(m, self.rad.add_up(&mag_of_float_up(&d)))
    }

    pub fn pi(prec: u32) -> Self {
        let (p, ord) = Float::with_val_round(prec, rug::float::Constant::Pi, Round::Nearest);
        let e = ulp_err(&p, ord);
        Ball::new(MpFloat(p), e)
    }

    pub fn ln2(prec: u32) -> Self {
        let (p, ord) = Float::with_val_round(prec, rug::float::Constant::Log2, Round::Nearest);
        let e = ulp_err(&p, ord);
        Ball::new(MpFloat(p), e)
    }

    /// Apply a monotone non-decreasing function by its endpoint values.
    fn monotone(&self, prec: u32, f: impl Fn(&Float, Round, u32) -> Float) -> Self {
        let (lo, hi) = self.endpoints(prec + 16);
        let a = f(&lo, Round::Down, prec + 16);
        let b = f(&hi, Round::Up, prec + 16);
        Ball::from_interval(&a, &b, prec)
    }

    pub fn exp(&self, prec: u32) -> Self {
        self.monotone(prec, |x, r, p| Float::with_val_round(p, x.exp_ref(), r).0)
    }

    pub fn log(&self, prec: u32) -> Result<Self, BallError> {
        if !self.is_positive() {
            return Err(BallError::Indeterminate("log of a ball touching 0"));
        }
        Ok(self.monotone(prec, |x, r, p| Float::with_val_round(p, x.ln_ref(), r).0))
    }

    /// Sine, Lipschitz-1 propagation of the input radius.
    pub fn sin(&self, prec: u32) -> Self {
        let (s, ord) = Float::with_val_round(prec, self.mid.0.sin_ref(), Round::Nearest);
        let e = ulp_err(&s, ord);
        Ball::new(MpFloat(s), self.rad.add_up(&e))
    }

    pub fn cos(&self, prec: u32) -> Self {
        let (s, ord) = Float::with_val_round(prec, self.mid.0.cos_ref(), Round::Nearest);
        let e = ulp_err(&s, ord);
        Ball::new(MpFloat(s), self.rad.add_up(&e))
    }

    /// `self^y` for a positive base.
    pub fn pow(&self, y: &Self, prec: u32) -> Result<Self, BallError> {
        let l = self.log(prec + 16)?;
        Ok(l.mul(y, prec + 16).exp(prec))
    }

    /// `self^(-s)` for an exact integer exponent.
    pub fn pow_neg_u(&self, s: u64, prec: u32) -> Result<Self, BallError> {
        self.pow_u(s, prec + 8).inv(prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_dyadic_add() {
        let one = BallReal::from_f64(1.0, 64);
        let two = one.add(&one, 64);
        assert_eq!(two.mid_f64(), 2.0);
        assert!(two.rad().is_zero());
    }

    #[test]
    fn third_has_radius() {
        let t = BallReal::from_ratio(1, 3, 53).unwrap();
        assert!(!t.rad().is_zero());
        let exact = rug::Rational::from((1, 3));
        let f = Float::with_val(200, &exact);
        assert!(t.contains(&BallReal::from_float(f)));
    }

    #[test]
    fn div_by_zero_is_error() {
        let z = BallReal::new(MpFloat::from_f64_prec(0.0, 64), Mag::from_f64(0.1));
        assert!(BallReal::from_f64(1.0, 64).div(&z, 64).is_err());
        assert!(z.log(64).is_err());
    }

    #[test]
    fn f64_ball_ops() {
        let a = BallF64::from_f64(0.1, 53);
        let b = BallF64::from_f64(0.7, 53);
        let q = a.div(&b, 53).unwrap();
        let exact = Float::with_val(200, 0.1f64) / Float::with_val(200, 0.7f64);
        assert!(BallReal::from(&q).contains(&BallReal::from_float(exact)));
    }

    #[test]
    fn endpoints_and_order() {
        let a = BallReal::new(MpFloat::from_f64_prec(1.0, 64), Mag::from_f64(0.25));
        assert_eq!(a.upper_f64(), 1.25);
        assert_eq!(a.lower_f64(), 0.75);
        let b = BallReal::from_f64(2.0, 64);
        assert!(a.lt(&b));
        let u = a.hull(&b);
        assert!(u.contains(&a) && u.contains(&b));
        assert_eq!(a.max_upper(&b).mid_f64(), 2.0);
    }
}
