//! Candidate (non-validated) real scalars: `f64` and the MPFR-backed [`MpFloat`].
//!
//! Algorithms that only produce *candidates* (Schur forms, SVD factors, Givens
//! reorderings) are written once against [`RealScalar`] and run at double or
//! arbitrary precision. Arithmetic between two `MpFloat`s rounds to the larger
//! of the two operand precisions.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::iter::Sum;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign,
};

use num_complex::Complex;
use num_traits::{Num, NumAssign, One, Zero};
use rug::float::{Round, Special};
use rug::Float;

use crate::mag::Mag;

/// A real field element usable in candidate computations.
pub trait RealScalar:
    Clone + Debug + PartialOrd + Send + Sync + 'static + Num + NumAssign + Neg<Output = Self>
{
    /// Exact conversion of an `f64` at the given precision (ignored for `f64`).
    fn from_f64_prec(x: f64, prec: u32) -> Self;
    fn to_f64(&self) -> f64;
    /// Working precision in bits.
    fn prec(&self) -> u32;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn hypot(&self, o: &Self) -> Self;
    fn is_finite(&self) -> bool;
    /// Unit roundoff `2^{-prec}` as an value of this type.
    fn epsilon_at(prec: u32) -> Self;
    /// Change precision (round to nearest); no-op for `f64`.
    fn with_prec(&self, prec: u32) -> Self;
    /// Upper bound on `|self|`.
    fn mag(&self) -> Mag;
}

/// Complex candidate scalar over a real type.
pub type Cplx<R> = Complex<R>;

/// `|z|` for a complex candidate.
pub fn cabs<R: RealScalar>(z: &Cplx<R>) -> R {
    z.re.hypot(&z.im)
}

/// `z̄`.
pub fn conj<R: RealScalar>(z: &Cplx<R>) -> Cplx<R> {
    Complex::new(z.re.clone(), -z.im.clone())
}

impl RealScalar for f64 {
    fn from_f64_prec(x: f64, _prec: u32) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn prec(&self) -> u32 {
        53
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn hypot(&self, o: &Self) -> Self {
        f64::hypot(*self, *o)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn epsilon_at(_prec: u32) -> Self {
        f64::EPSILON / 2.0
    }
    fn with_prec(&self, _prec: u32) -> Self {
        *self
    }
    fn mag(&self) -> Mag {
        Mag::from_f64(*self)
    }
}

/// Arbitrary-precision float; a thin newtype over [`rug::Float`].
#[derive(Clone, PartialEq, PartialOrd)]
pub struct MpFloat(pub Float);

impl MpFloat {
    pub fn zero_prec(prec: u32) -> Self {
        MpFloat(Float::new(prec))
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    pub fn into_inner(self) -> Float {
        self.0
    }

    /// Parse a decimal string, rounding to nearest at `prec` bits.
    pub fn parse_prec(s: &str, prec: u32) -> Option<Self> {
        let p = Float::parse(s).ok()?;
        Some(MpFloat(Float::with_val(prec, p)))
    }

    fn pmax(&self, o: &Self) -> u32 {
        self.0.prec().max(o.0.prec())
    }
}

impl Debug for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_radix(10, Some(20)))
    }
}

impl Display for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(&self.0, f)
    }
}

macro_rules! mp_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident, $op:tt) => {
        impl $tr for MpFloat {
            type Output = MpFloat;
            fn $m(self, o: MpFloat) -> MpFloat {
                let p = self.pmax(&o);
                MpFloat(Float::with_val(p, &self.0 $op &o.0))
            }
        }
        impl<'a> $tr<&'a MpFloat> for &'a MpFloat {
            type Output = MpFloat;
            fn $m(self, o: &'a MpFloat) -> MpFloat {
                let p = self.pmax(o);
                MpFloat(Float::with_val(p, &self.0 $op &o.0))
            }
        }
        impl $atr for MpFloat {
            fn $am(&mut self, o: MpFloat) {
                let p = self.pmax(&o);
                if p == self.0.prec() {
                    self.0 = Float::with_val(p, &self.0 $op &o.0);
                } else {
                    *self = MpFloat(Float::with_val(p, &self.0 $op &o.0));
                }
            }
        }
    };
}

mp_binop!(Add, add, AddAssign, add_assign, +);
mp_binop!(Sub, sub, SubAssign, sub_assign, -);
mp_binop!(Mul, mul, MulAssign, mul_assign, *);
mp_binop!(Div, div, DivAssign, div_assign, /);

impl Rem for MpFloat {
    type Output = MpFloat;
    fn rem(self, o: MpFloat) -> MpFloat {
        let p = self.pmax(&o);
        MpFloat(Float::with_val(p, &self.0 % &o.0))
    }
}

impl RemAssign for MpFloat {
    fn rem_assign(&mut self, o: MpFloat) {
        let p = self.pmax(&o);
        *self = MpFloat(Float::with_val(p, &self.0 % &o.0));
    }
}

impl Neg for MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat(-self.0)
    }
}

impl Zero for MpFloat {
    fn zero() -> Self {
        MpFloat(Float::new(1))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for MpFloat {
    fn one() -> Self {
        MpFloat(Float::with_val(1, 1))
    }
}

impl Num for MpFloat {
    type FromStrRadixErr = rug::float::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let p = Float::parse_radix(s, radix as i32)?;
        Ok(MpFloat(Float::with_val(256, p)))
    }
}

impl Sum for MpFloat {
    fn sum<I: Iterator<Item = MpFloat>>(iter: I) -> Self {
        iter.fold(MpFloat::zero(), |a, b| a + b)
    }
}

impl RealScalar for MpFloat {
    fn from_f64_prec(x: f64, prec: u32) -> Self {
        MpFloat(Float::with_val(prec.max(53), x))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn prec(&self) -> u32 {
        self.0.prec()
    }
    fn sqrt(&self) -> Self {
        MpFloat(Float::with_val(self.0.prec(), self.0.sqrt_ref()))
    }
    fn abs(&self) -> Self {
        MpFloat(Float::with_val(self.0.prec(), self.0.abs_ref()))
    }
    fn hypot(&self, o: &Self) -> Self {
        MpFloat(Float::with_val(self.pmax(o), self.0.hypot_ref(&o.0)))
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn epsilon_at(prec: u32) -> Self {
        MpFloat(Float::with_val(prec, Float::u_exp(1, -(prec as i32))))
    }
    fn with_prec(&self, prec: u32) -> Self {
        MpFloat(Float::with_val(prec, &self.0))
    }
    fn mag(&self) -> Mag {
        mag_of_float_up(&self.0)
    }
}

/// Upper bound on `|x|`.
pub fn mag_of_float_up(x: &Float) -> Mag {
    if x.is_zero() {
        return Mag::ZERO;
    }
    if !x.is_finite() {
        return Mag::INF;
    }
    let e = x.get_exp().unwrap_or(0) as i64;
    if e.abs() < 1000 {
        return Mag::from_f64(x.to_f64_round(if x.is_sign_negative() {
            Round::Down
        } else {
            Round::Up
        }));
    }
    // mantissa rounded up to 53 bits, value in [0.5, 1]
    let mut m = Float::with_val(x.prec(), x.abs_ref());
    m >>= e as i32;
    let mf = m.to_f64_round(Round::Up);
    Mag::from_f64(mf).mul_2exp(e)
}

/// Lower bound on `|x|`.
pub fn mag_of_float_down(x: &Float) -> Mag {
    if x.is_zero() {
        return Mag::ZERO;
    }
    if !x.is_finite() {
        return Mag::INF;
    }
    let e = x.get_exp().unwrap_or(0) as i64;
    if e.abs() < 1000 {
        return Mag::from_f64(x.to_f64_round(if x.is_sign_negative() {
            Round::Up
        } else {
            Round::Down
        }));
    }
    let mut m = Float::with_val(x.prec(), x.abs_ref());
    m >>= e as i32;
    let mf = m.to_f64_round(Round::Down);
    Mag::from_f64(mf).mul_2exp(e)
}

/// Exact conversion of a magnitude into a `Float` (53-bit mantissa suffices).
pub fn float_of_mag(m: &Mag) -> Float {
    if m.is_zero() {
        return Float::new(64);
    }
    if !m.is_finite() {
        return Float::with_val(64, Special::Infinity);
    }
    let (mm, e) = m.parts();
    let mut f = Float::with_val(64, mm);
    if e > i32::MAX as i64 || e < i32::MIN as i64 {
        return if e > 0 {
            Float::with_val(64, Special::Infinity)
        } else {
            Float::new(64)
        };
    }
    f <<= e as i32;
    f
}

/// Total order helper for candidate comparisons that must not panic on NaN.
pub fn cmp_total<R: RealScalar>(a: &R, b: &R) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}
