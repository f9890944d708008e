//! Decimal text form of balls: `"[-3.0366300e-1 +/- 2.1e-45]"`.
//!
//! Printing rounds the midpoint to a decimal string and adds the rounding
//! error to the printed radius, so parsing a printed ball always yields a
//! ball containing the original.

use rug::float::Round;
use rug::Float;

use crate::ball::BallReal;
use crate::complex::BallComplex;
use crate::error::BallError;
use crate::mag::Mag;
use crate::scalar::{float_of_mag, mag_of_float_up, MpFloat};

fn sci(sign: bool, digits: &str, exp: Option<i32>) -> String {
    let e = exp.unwrap_or(1) - 1;
    let mut s = String::new();
    if sign {
        s.push('-');
    }
    let (first, rest) = digits.split_at(1);
    s.push_str(first);
    if !rest.is_empty() {
        s.push('.');
        s.push_str(rest);
    }
    s.push_str(&format!("e{e}"));
    s
}

/// Upper bound of `10^k` as a magnitude.
fn pow10_up(k: i64) -> Mag {
    let (t, _) = Float::with_val_round(64, Float::i_pow_u(10, k.unsigned_abs() as u32), Round::Up);
    let m = mag_of_float_up(&t);
    if k >= 0 {
        m
    } else {
        Mag::from_f64(1.0).div_up(&m)
    }
}

/// Format a radius with two significant digits, rounded up.
fn format_rad(r: &Mag) -> String {
    if r.is_zero() {
        return "0".into();
    }
    if !r.is_finite() {
        return "inf".into();
    }
    let f = float_of_mag(r);
    let (_, d, e) = f.to_sign_string_exp_round(10, Some(2), Round::Up);
    sci(false, &d, e)
}

impl BallReal {
    /// Text form with `digits` significant midpoint digits.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let mid = &self.mid().0;
        if mid.is_zero() {
            return format!("[0 +/- {}]", format_rad(&self.rad()));
        }
        let (sign, d, e) = mid.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
        // midpoint printed as 0.d × 10^e: half a unit in the last place lost
        let drop = pow10_up(e.unwrap_or(0) as i64 - digits as i64);
        let r = self.rad().add_up(&drop);
        format!("[{} +/- {}]", sci(sign, &d, e), format_rad(&r))
    }

    /// Enough digits to keep the printing error below a tenth of the radius
    /// (capped by the working precision).
    pub fn auto_digits(&self) -> usize {
        let cap = (self.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        let mid = &self.mid().0;
        if mid.is_zero() || self.rad().is_zero() || !self.rad().is_finite() {
            return cap;
        }
        let mexp = mid.get_exp().unwrap_or(0) as f64 * std::f64::consts::LOG10_2;
        let rexp = self.rad().log10_approx();
        let want = (mexp - rexp).ceil() + 2.0;
        (want.max(1.0) as usize).min(cap)
    }

    pub fn parse(s: &str, prec: u32) -> Result<BallReal, BallError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| BallError::Parse(s.to_string()))?;
        let (m, r) = match inner.split_once("+/-") {
            Some((m, r)) => (m.trim(), r.trim()),
            None => (inner.trim(), "0"),
        };
        let mp = Float::parse(m).map_err(|e| BallError::Parse(format!("{m}: {e}")))?;
        let (mid, ord) = Float::with_val_round(prec, mp, Round::Nearest);
        let mut rad = Mag::ZERO;
        if ord != std::cmp::Ordering::Equal {
            if let Some(e) = mid.get_exp() {
                rad = Mag::pow2(e as i64 - prec as i64);
            }
        }
        let rr = if r == "inf" {
            Mag::INF
        } else {
            let rp = Float::parse(r).map_err(|e| BallError::Parse(format!("{r}: {e}")))?;
            let (rf, _) = Float::with_val_round(64, rp, Round::Up);
            mag_of_float_up(&rf)
        };
        Ok(BallReal::new(MpFloat(mid), rad.add_up(&rr)))
    }
}

impl std::fmt::Display for BallReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = f.precision().unwrap_or_else(|| self.auto_digits());
        write!(f, "{}", self.to_string_digits(d))
    }
}

impl std::str::FromStr for BallReal {
    type Err = BallError;
    fn from_str(s: &str) -> Result<Self, BallError> {
        BallReal::parse(s, 256)
    }
}

impl BallComplex {
    /// `re ; im` pair of ball strings.
    pub fn to_text(&self) -> String {
        format!("{} ; {}", self.re, self.im)
    }

    pub fn parse_text(s: &str, prec: u32) -> Result<BallComplex, BallError> {
        let (a, b) = s
            .split_once(';')
            .ok_or_else(|| BallError::Parse(s.to_string()))?;
        Ok(BallComplex::new(
            BallReal::parse(a, prec)?,
            BallReal::parse(b, prec)?,
        ))
    }
}

impl std::fmt::Display for BallComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_shape() {
        let b = BallReal::parse("[-3.0366300e-1 +/- 2.1e-45]", 256).unwrap();
        let s = b.to_string_digits(8);
        assert!(s.starts_with("[-3.0366300e-1 +/- "), "{s}");
        assert!(b.rad().to_f64_up() >= 2.1e-45);
    }

    #[test]
    fn roundtrip_contains() {
        let third = BallReal::from_ratio(1, 3, 200).unwrap();
        for d in [3, 10, 40, 80] {
            let s = third.to_string_digits(d);
            let back = BallReal::parse(&s, 200).unwrap();
            assert!(back.contains(&third), "{d}: {s}");
        }
        let auto = format!("{third}");
        assert!(BallReal::parse(&auto, 200).unwrap().contains(&third));
    }

    #[test]
    fn zero_and_exact() {
        let z = BallReal::zero(64);
        assert_eq!(z.to_string(), "[0 +/- 0]");
        let one = BallReal::from_f64(1.0, 64);
        assert!(BallReal::parse(&one.to_string(), 64)
            .unwrap()
            .contains(&one));
    }
}
