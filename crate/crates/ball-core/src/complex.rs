//! Rectangular complex balls.

use std::fmt;

use crate::ball::{Ball, BallF64, BallFloat, BallReal};
use crate::error::BallError;
use crate::mag::Mag;
use crate::scalar::{Cplx, MpFloat};

#[derive(Clone, PartialEq)]
pub struct ComplexBall<F: BallFloat> {
    pub re: Ball<F>,
    pub im: Ball<F>,
}

pub type BallComplex = ComplexBall<MpFloat>;
pub type BallComplexF64 = ComplexBall<f64>;

impl<F: BallFloat> ComplexBall<F> {
    pub fn new(re: Ball<F>, im: Ball<F>) -> Self {
        ComplexBall { re, im }
    }

    pub fn from_real(re: Ball<F>) -> Self {
        let p = re.prec();
        ComplexBall {
            re,
            im: Ball::zero(p),
        }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBall {
            re: Ball::zero(prec),
            im: Ball::zero(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        ComplexBall::from_real(Ball::from_f64(1.0, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        ComplexBall {
            re: Ball::from_f64(re, prec),
            im: Ball::from_f64(im, prec),
        }
    }

    /// Exact ball around a candidate complex value.
    pub fn exact(z: &Cplx<F>) -> Self {
        ComplexBall {
            re: Ball::exact(z.re.clone()),
            im: Ball::exact(z.im.clone()),
        }
    }

    pub fn mid(&self) -> Cplx<F> {
        Cplx::new(self.re.mid().clone(), self.im.mid().clone())
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_exact(&self) -> bool {
        self.re.is_exact() && self.im.is_exact()
    }

    /// Radius of the smallest disc around the midpoint containing the rectangle.
    pub fn rad(&self) -> Mag {
        let a = self.re.rad();
        let b = self.im.rad();
        a.mul_up(&a).add_up(&b.mul_up(&b)).sqrt_up()
    }

    pub fn inflate(&self, r: Mag) -> Self {
        ComplexBall {
            re: self.re.inflate(r),
            im: self.im.inflate(r),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexBall {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        ComplexBall {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        ComplexBall {
            re: self.re.sub(&o.re, prec),
            im: self.im.sub(&o.im, prec),
        }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        if self.im.is_exact() && self.im.mid().is_zero() {
            return o.mul_real(&self.re, prec);
        }
        let re = self
            .re
            .mul(&o.re, prec)
            .sub(&self.im.mul(&o.im, prec), prec);
        let im = self
            .re
            .mul(&o.im, prec)
            .add(&self.im.mul(&o.re, prec), prec);
        ComplexBall { re, im }
    }

    pub fn mul_real(&self, r: &Ball<F>, prec: u32) -> Self {
        ComplexBall {
            re: self.re.mul(r, prec),
            im: self.im.mul(r, prec),
        }
    }

    pub fn div_real(&self, r: &Ball<F>, prec: u32) -> Result<Self, BallError> {
        Ok(ComplexBall {
            re: self.re.div(r, prec)?,
            im: self.im.div(r, prec)?,
        })
    }

    /// `|z|²` as a real ball.
    pub fn abs_sqr(&self, prec: u32) -> Ball<F> {
        self.re.sqr(prec).add(&self.im.sqr(prec), prec)
    }

    pub fn div(&self, o: &Self, prec: u32) -> Result<Self, BallError> {
        let d = o.abs_sqr(prec + 16);
        if d.contains_zero() {
            return Err(BallError::Indeterminate(
                "complex division by a ball containing 0",
            ));
        }
        self.mul(&o.conj(), prec + 16).div_real(&d, prec)
    }

    pub fn inv(&self, prec: u32) -> Result<Self, BallError> {
        ComplexBall::one(prec).div(self, prec)
    }

    /// Upper bound on `|z|` (corner evaluation).
    pub fn abs_upper(&self) -> Mag {
        let a = self.re.mag_upper();
        let b = self.im.mag_upper();
        a.mul_up(&a).add_up(&b.mul_up(&b)).sqrt_up()
    }

    /// Lower bound on `|z|` over the rectangle.
    pub fn abs_lower(&self) -> Mag {
        let a = self.re.mag_lower();
        let b = self.im.mag_lower();
        a.mul_down(&a).add_down(&b.mul_down(&b)).sqrt_down()
    }

    pub fn to_complex_mp(&self) -> BallComplex {
        ComplexBall::new(self.re.to_real(), self.im.to_real())
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, o: &Self) -> bool {
        self.re.contains(&o.re) && self.im.contains(&o.im)
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn pow_u(&self, mut n: u64, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexBall::one(prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }
}

impl BallComplex {
    /// Modulus as a real ball `[abs_lower, abs_upper]`.
    pub fn abs_ball(&self, prec: u32) -> BallReal {
        let lo = crate::scalar::float_of_mag(&self.abs_lower());
        let hi = crate::scalar::float_of_mag(&self.abs_upper());
        BallReal::from_interval(&lo, &hi, prec)
    }

    pub fn to_f64_ball(&self) -> BallComplexF64 {
        ComplexBall {
            re: self.re.to_f64_ball(),
            im: self.im.to_f64_ball(),
        }
    }

    /// Enclosure of `e^{iθ}`.
    pub fn expi(theta: &BallReal, prec: u32) -> Self {
        ComplexBall {
            re: theta.cos(prec),
            im: theta.sin(prec),
        }
    }
}

impl From<&BallComplexF64> for BallComplex {
    fn from(z: &BallComplexF64) -> Self {
        ComplexBall {
            re: BallReal::from(&z.re),
            im: BallReal::from(&z.im),
        }
    }
}

impl From<&BallF64> for BallComplexF64 {
    fn from(r: &BallF64) -> Self {
        ComplexBall::from_real(r.clone())
    }
}

impl<F: BallFloat> fmt::Debug for ComplexBall<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + i{:?})", self.re, self.im)
    }
}
