//! Small helpers for complex candidate arithmetic over any [`RealScalar`].

use ball_core::{cabs, conj, Cplx, RealScalar};

pub fn zero<R: RealScalar>(prec: u32) -> Cplx<R> {
    Cplx::new(R::from_f64_prec(0.0, prec), R::from_f64_prec(0.0, prec))
}

pub fn from_f64<R: RealScalar>(re: f64, im: f64, prec: u32) -> Cplx<R> {
    Cplx::new(R::from_f64_prec(re, prec), R::from_f64_prec(im, prec))
}

pub fn abs2<R: RealScalar>(z: &Cplx<R>) -> R {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}

pub fn is_zero<R: RealScalar>(z: &Cplx<R>) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// Principal square root.
pub fn sqrt<R: RealScalar>(z: &Cplx<R>) -> Cplx<R> {
    let p = z.re.prec();
    let r = cabs(z);
    let half = R::from_f64_prec(0.5, p);
    let t = ((r + z.re.abs()) * half).sqrt();
    if t.is_zero() {
        return zero(p);
    }
    let two_t = t.clone() + t.clone();
    if z.re >= R::from_f64_prec(0.0, p) {
        Cplx::new(t, z.im.clone() / two_t)
    } else {
        let im = if z.im < R::from_f64_prec(0.0, p) {
            -t
        } else {
            t.clone()
        };
        Cplx::new(z.im.abs() / two_t, im)
    }
}

/// Unit-modulus phase `z/|z|` (1 for `z = 0`).
pub fn phase<R: RealScalar>(z: &Cplx<R>) -> Cplx<R> {
    let a = cabs(z);
    if a.is_zero() {
        return from_f64(1.0, 0.0, z.re.prec());
    }
    Cplx::new(z.re.clone() / a.clone(), z.im.clone() / a)
}

/// Rotation `[[c, s], [−s̄, c]]` with real `c` mapping `(a, b)` to `(r, 0)`.
pub fn givens<R: RealScalar>(a: &Cplx<R>, b: &Cplx<R>) -> (R, Cplx<R>) {
    let p = a.re.prec().max(b.re.prec());
    let na = cabs(a);
    let nb = cabs(b);
    if nb.is_zero() {
        return (R::from_f64_prec(1.0, p), zero(p));
    }
    if na.is_zero() {
        let s = conj(b);
        return (
            R::from_f64_prec(0.0, p),
            Cplx::new(s.re / nb.clone(), s.im / nb),
        );
    }
    let nrm = na.hypot(&nb);
    let c = na.clone() / nrm.clone();
    let ph = Cplx::new(a.re.clone() / na.clone(), a.im.clone() / na);
    let s = ph * conj(b);
    (c, Cplx::new(s.re / nrm.clone(), s.im / nrm))
}
