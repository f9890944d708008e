//! Low-precision magnitudes used as ball radii.
//!
//! A [`Mag`] is `m * 2^e` with `m` a normalized `f64` in `[0.5, 1)` and an
//! unbounded `i64` exponent, so radii never underflow or overflow. Every
//! operation comes in an upward-rounded flavour; the few downward-rounded
//! ones are used for lower bounds of denominators.

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Copy, PartialEq)]
pub struct Mag {
    m: f64,
    e: i64,
}

/// Split a positive finite `x` into `(m, e)` with `m ∈ [0.5, 1)` and `x = m·2^e`.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i64;
    if exp_field == 0 {
        // subnormal: scale into the normal range first (exact)
        let (m, e) = frexp(x * f64::from_bits(0x43f0_0000_0000_0000)); // 2^64
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022u64 << 52));
    (m, exp_field - 1022)
}

/// `x · 2^k` with exact power-of-two steps (inexact only on underflow).
pub(crate) fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= f64::from_bits(((1000 + 1023) as u64) << 52);
        k -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1000 {
        x *= f64::from_bits(((-1000i64 + 1023) as u64) << 52);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    if k >= -1022 {
        x * f64::from_bits(((k + 1023) as u64) << 52)
    } else {
        // scale into the normal range exactly, then a single rounding step
        (x * f64::from_bits(((k + 1022 + 1023) as u64) << 52)) * f64::MIN_POSITIVE
    }
}

fn next_up(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    f64::from_bits(x.to_bits() + 1)
}

fn next_down(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    f64::from_bits(x.to_bits() - 1)
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0.0, e: 0 };
    pub const INF: Mag = Mag {
        m: f64::INFINITY,
        e: 0,
    };

    fn norm(m: f64, e: i64) -> Mag {
        if m == 0.0 {
            return Mag::ZERO;
        }
        if m.is_infinite() || m.is_nan() {
            return Mag::INF;
        }
        let (mm, ee) = frexp(m);
        Mag { m: mm, e: e + ee }
    }

    /// Exact conversion of `|x|`; NaN and infinities map to `INF`.
    pub fn from_f64(x: f64) -> Mag {
        let x = x.abs();
        if x.is_nan() {
            return Mag::INF;
        }
        Mag::norm(x, 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Mag {
        Mag { m: 0.5, e: k + 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.m.is_finite()
    }

    /// Mantissa and exponent, value `m·2^e`.
    pub fn parts(&self) -> (f64, i64) {
        (self.m, self.e)
    }

    /// Binary exponent `e` with value in `[2^(e-1), 2^e)`; `None` for zero or infinity.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() || !self.is_finite() {
            None
        } else {
            Some(self.e)
        }
    }

    /// Upper bound as an `f64` (`+inf` on overflow, smallest subnormal on underflow).
    pub fn to_f64_up(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if !self.is_finite() || self.e > 1024 {
            return f64::INFINITY;
        }
        if self.e < -1070 {
            return f64::from_bits(1);
        }
        let v = ldexp(self.m, self.e);
        if v < f64::MIN_POSITIVE {
            // possible rounding in the subnormal range
            f64::from_bits(v.to_bits() + 1)
        } else {
            v
        }
    }

    /// Lower bound as an `f64` (flushes to 0 on underflow).
    pub fn to_f64_down(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if !self.is_finite() {
            return f64::MAX;
        }
        if self.e > 1024 {
            return f64::MAX;
        }
        if self.e < -1070 {
            return 0.0;
        }
        let v = ldexp(self.m, self.e);
        if v < f64::MIN_POSITIVE && v > 0.0 {
            f64::from_bits(v.to_bits() - 1)
        } else {
            v
        }
    }

    pub fn add_up(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::INF;
        }
        let (a, b) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = a.e - b.e;
        if d > 60 {
            return Mag::norm(next_up(a.m), a.e);
        }
        let bs = ldexp(b.m, -d);
        let s = a.m + bs;
        // two-sum error term tells whether s was rounded down
        let bb = s - a.m;
        let err = (a.m - (s - bb)) + (bs - bb);
        let s = if err > 0.0 { next_up(s) } else { s };
        Mag::norm(s, a.e)
    }

    /// Lower bound on `self + o`.
    pub fn add_down(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::INF;
        }
        let (a, b) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = a.e - b.e;
        if d > 60 {
            return *a;
        }
        let bs = ldexp(b.m, -d);
        let s = a.m + bs;
        let bb = s - a.m;
        let err = (a.m - (s - bb)) + (bs - bb);
        let s = if err < 0.0 { next_down(s) } else { s };
        Mag::norm(s, a.e)
    }

    /// Lower bound on `max(self − o, 0)`.
    pub fn sub_down(&self, o: &Mag) -> Mag {
        if o.is_zero() {
            return *self;
        }
        if !self.is_finite() {
            return if o.is_finite() { Mag::INF } else { Mag::ZERO };
        }
        if !o.is_finite() || *self <= *o {
            return Mag::ZERO;
        }
        let d = self.e - o.e;
        if d > 60 {
            return Mag::norm(next_down(self.m), self.e);
        }
        let os = ldexp(o.m, -d);
        let s = self.m - os;
        if s <= 0.0 {
            return Mag::ZERO;
        }
        let bb = s - self.m;
        let err = (self.m - (s - bb)) + (-os - bb);
        let s = if err < 0.0 { next_down(s) } else { s };
        if s <= 0.0 {
            return Mag::ZERO;
        }
        Mag::norm(s, self.e)
    }

    /// Upper bound on `max(self − o, 0)`.
    pub fn sub_up(&self, o: &Mag) -> Mag {
        if o.is_zero() || !self.is_finite() {
            return *self;
        }
        if !o.is_finite() || *self <= *o {
            return Mag::ZERO;
        }
        let d = self.e - o.e;
        if d > 60 {
            return *self;
        }
        let os = ldexp(o.m, -d);
        let s = self.m - os;
        if s <= 0.0 {
            return Mag::ZERO;
        }
        let bb = s - self.m;
        let err = (self.m - (s - bb)) + (-os - bb);
        let s = if err > 0.0 { next_up(s) } else { s };
        Mag::norm(s, self.e)
    }

    pub fn mul_up(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::INF;
        }
        let p = self.m * o.m;
        let err = self.m.mul_add(o.m, -p);
        let p = if err > 0.0 { next_up(p) } else { p };
        Mag::norm(p, self.e + o.e)
    }

    pub fn mul_down(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::INF;
        }
        let p = self.m * o.m;
        let err = self.m.mul_add(o.m, -p);
        let p = if err < 0.0 { next_down(p) } else { p };
        Mag::norm(p, self.e + o.e)
    }

    pub fn div_up(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        if o.is_zero() || !self.is_finite() {
            return Mag::INF;
        }
        if !o.is_finite() {
            return Mag::ZERO;
        }
        let q = self.m / o.m;
        // q·o − self < 0  ⇒  q underestimates
        let r = q.mul_add(o.m, -self.m);
        let q = if r < 0.0 { next_up(q) } else { q };
        Mag::norm(q, self.e - o.e)
    }

    pub fn div_down(&self, o: &Mag) -> Mag {
        if self.is_zero() || !o.is_finite() {
            return Mag::ZERO;
        }
        if o.is_zero() || !self.is_finite() {
            return Mag::INF;
        }
        let q = self.m / o.m;
        let r = q.mul_add(o.m, -self.m);
        let q = if r > 0.0 { next_down(q) } else { q };
        Mag::norm(q, self.e - o.e)
    }

    pub fn sqrt_up(&self) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return *self;
        }
        let (m, e) = if self.e % 2 != 0 {
            (self.m * 2.0, self.e - 1)
        } else {
            (self.m, self.e)
        };
        let r = m.sqrt();
        let d = r.mul_add(r, -m);
        let r = if d < 0.0 { next_up(r) } else { r };
        Mag::norm(r, e / 2)
    }

    pub fn sqrt_down(&self) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return *self;
        }
        let (m, e) = if self.e % 2 != 0 {
            (self.m * 2.0, self.e - 1)
        } else {
            (self.m, self.e)
        };
        let r = m.sqrt();
        let d = r.mul_add(r, -m);
        let r = if d > 0.0 { next_down(r) } else { r };
        Mag::norm(r, e / 2)
    }

    /// `self · 2^k` (exact).
    pub fn mul_2exp(&self, k: i64) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return *self;
        }
        Mag {
            m: self.m,
            e: self.e + k,
        }
    }

    /// Upper bound for `self · x` with a nonnegative `f64` factor.
    pub fn mul_f64_up(&self, x: f64) -> Mag {
        self.mul_up(&Mag::from_f64(x))
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o {
            self
        } else {
            o
        }
    }

    pub fn min(self, o: Mag) -> Mag {
        if self <= o {
            self
        } else {
            o
        }
    }

    /// Rough base-10 logarithm for display purposes.
    pub fn log10_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if !self.is_finite() {
            return f64::INFINITY;
        }
        self.m.log10() + self.e as f64 * std::f64::consts::LOG10_2
    }
}

impl Default for Mag {
    fn default() -> Self {
        Mag::ZERO
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, o: &Mag) -> Option<Ordering> {
        Some(match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => match (self.is_finite(), o.is_finite()) {
                (false, false) => Ordering::Equal,
                (false, true) => Ordering::Greater,
                (true, false) => Ordering::Less,
                _ => self
                    .e
                    .cmp(&o.e)
                    .then(self.m.partial_cmp(&o.m).unwrap_or(Ordering::Equal)),
            },
        })
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else if !self.is_finite() {
            write!(f, "inf")
        } else {
            write!(f, "{}*2^{}", self.m, self.e)
        }
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if !self.is_finite() {
            return write!(f, "inf");
        }
        let l = self.log10_approx();
        write!(f, "~1e{:.1}", l)
    }
}
