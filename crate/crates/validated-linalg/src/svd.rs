//! One-sided Jacobi SVD candidates and Rump-style singular value enclosures.

use ball_core::{
    cabs, conj, BallFloat, BallMatrix, ComplexBall, Cplx, FloatMatrix, Mag, RealScalar,
};

use crate::bound::one;
use crate::cplx;
use crate::schur::unitarity_defect;
use crate::LinalgError;

/// Unvalidated `B ≈ U diag(s) V*`.
#[derive(Clone, Debug)]
pub struct SvdCandidate<R: RealScalar> {
    pub u: FloatMatrix<R>,
    pub s: Vec<R>,
    pub v: FloatMatrix<R>,
}

fn dot<R: RealScalar>(x: &[Cplx<R>], y: &[Cplx<R>], p: u32) -> Cplx<R> {
    x.iter()
        .zip(y)
        .fold(cplx::zero(p), |acc, (a, b)| acc + conj(a) * b.clone())
}

fn norm2<R: RealScalar>(x: &[Cplx<R>], p: u32) -> R {
    x.iter()
        .fold(R::from_f64_prec(0.0, p), |acc, a| acc + cplx::abs2(a))
}

/// One-sided (Hestenes) Jacobi SVD of a square matrix. `warm` is an
/// optional starting guess for `V`, typically from a nearby matrix.
pub fn jacobi_svd<R: RealScalar>(
    b: &FloatMatrix<R>,
    warm: Option<&FloatMatrix<R>>,
) -> SvdCandidate<R> {
    let n = b.rows();
    let p = b.prec();
    let v0 = match warm {
        Some(w) if w.rows() == n && w.cols() == n => w.clone(),
        _ => FloatMatrix::identity(n, p),
    };
    let bv = b.mul(&v0).unwrap_or_else(|_| b.clone());
    let mut cols: Vec<Vec<Cplx<R>>> = (0..n).map(|j| bv.column(j)).collect();
    let mut vcols: Vec<Vec<Cplx<R>>> = (0..n).map(|j| v0.column(j)).collect();
    let eps = R::epsilon_at(p);
    let one_r = R::from_f64_prec(1.0, p);
    let two = R::from_f64_prec(2.0, p);
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let a = norm2(&cols[i], p);
                let bb = norm2(&cols[j], p);
                let g = dot(&cols[i], &cols[j], p);
                let ag = cabs(&g);
                if ag.is_zero() || ag <= eps.clone() * (a.clone() * bb.clone()).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (bb - a) / (two.clone() * ag.clone());
                let t = {
                    let den = zeta.abs() + (one_r.clone() + zeta.clone() * zeta.clone()).sqrt();
                    let t = one_r.clone() / den;
                    if zeta < R::from_f64_prec(0.0, p) {
                        -t
                    } else {
                        t
                    }
                };
                let c = one_r.clone() / (one_r.clone() + t.clone() * t.clone()).sqrt();
                let s = c.clone() * t;
                let ph = conj(&Cplx::new(g.re / ag.clone(), g.im / ag));
                for m in [&mut cols, &mut vcols] {
                    let (lo, hi) = m.split_at_mut(j);
                    for (x, y) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                        let yq = y.clone() * ph.clone();
                        let xn = x.clone() * c.clone() - yq.clone() * s.clone();
                        *y = x.clone() * s.clone() + yq * c.clone();
                        *x = xn;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let bm = FloatMatrix::from_fn(n, n, |i, j| cols[j][i].clone());
    let vm = FloatMatrix::from_fn(n, n, |i, j| vcols[j][i].clone());
    finish_svd(&bm, vm)
}

/// Double-precision specialization of [`jacobi_svd`] on split real and
/// imaginary column-major storage, with column norms updated in place.
pub fn jacobi_svd_f64(b: &FloatMatrix<f64>, warm: Option<&FloatMatrix<f64>>) -> SvdCandidate<f64> {
    let n = b.rows();
    let v0 = match warm {
        Some(w) if w.rows() == n && w.cols() == n => w.clone(),
        _ => FloatMatrix::identity(n, 53),
    };
    let bv = b.mul(&v0).unwrap_or_else(|_| b.clone());
    let split = |m: &FloatMatrix<f64>| {
        let mut re = vec![0.0; n * n];
        let mut im = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                re[j * n + i] = m[(i, j)].re;
                im[j * n + i] = m[(i, j)].im;
            }
        }
        (re, im)
    };
    let (mut br, mut bi) = split(&bv);
    let (mut vr, mut vi) = split(&v0);
    let colnorm = |re: &[f64], im: &[f64], j: usize| -> f64 {
        re[j * n..(j + 1) * n]
            .iter()
            .zip(&im[j * n..(j + 1) * n])
            .map(|(a, b)| a * a + b * b)
            .sum()
    };
    let tol = 4.0 * f64::EPSILON;
    for _sweep in 0..60 {
        let mut d: Vec<f64> = (0..n).map(|j| colnorm(&br, &bi, j)).collect();
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut gr, mut gi) = (0.0, 0.0);
                {
                    let (pr, pi) = (&br[p * n..(p + 1) * n], &bi[p * n..(p + 1) * n]);
                    let (qr, qi) = (&br[q * n..(q + 1) * n], &bi[q * n..(q + 1) * n]);
                    for i in 0..n {
                        gr += pr[i] * qr[i] + pi[i] * qi[i];
                        gi += pr[i] * qi[i] - pi[i] * qr[i];
                    }
                }
                let ag = gr.hypot(gi);
                if ag == 0.0 || ag <= tol * (d[p] * d[q]).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (d[q] - d[p]) / (2.0 * ag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (er, ei) = (gr / ag, -gi / ag);
                for (xr, xi) in [(&mut br, &mut bi), (&mut vr, &mut vi)] {
                    let (lo_r, hi_r) = xr.split_at_mut(q * n);
                    let (lo_i, hi_i) = xi.split_at_mut(q * n);
                    let (pr, pi) = (&mut lo_r[p * n..(p + 1) * n], &mut lo_i[p * n..(p + 1) * n]);
                    let (qr, qi) = (&mut hi_r[..n], &mut hi_i[..n]);
                    for i in 0..n {
                        let yr = qr[i] * er - qi[i] * ei;
                        let yi = qr[i] * ei + qi[i] * er;
                        let (ar, ai) = (pr[i], pi[i]);
                        pr[i] = c * ar - s * yr;
                        pi[i] = c * ai - s * yi;
                        qr[i] = s * ar + c * yr;
                        qi[i] = s * ai + c * yi;
                    }
                }
                d[p] -= t * ag;
                d[q] += t * ag;
            }
        }
        if !rotated {
            break;
        }
    }
    let bm = FloatMatrix::from_fn(n, n, |i, j| Cplx::new(br[j * n + i], bi[j * n + i]));
    let vm = FloatMatrix::from_fn(n, n, |i, j| Cplx::new(vr[j * n + i], vi[j * n + i]));
    finish_svd(&bm, vm)
}

/// Singular values from column norms and a unitary completion of `U`.
fn finish_svd<R: RealScalar>(bv: &FloatMatrix<R>, v: FloatMatrix<R>) -> SvdCandidate<R> {
    let n = bv.rows();
    let p = bv.prec();
    let cols: Vec<Vec<Cplx<R>>> = (0..n).map(|j| bv.column(j)).collect();
    let eps = R::epsilon_at(p);
    let s: Vec<R> = cols.iter().map(|c| norm2(c, p).sqrt()).collect();
    let smax = s.iter().fold(
        R::from_f64_prec(0.0, p),
        |m, x| if *x > m { x.clone() } else { m },
    );
    let tiny = smax * eps * R::from_f64_prec(n as f64 * 16.0, p);
    let mut ucols: Vec<Option<Vec<Cplx<R>>>> = cols
        .iter()
        .zip(&s)
        .map(|(c, si)| {
            if *si > tiny && !si.is_zero() {
                Some(
                    c.iter()
                        .map(|z| Cplx::new(z.re.clone() / si.clone(), z.im.clone() / si.clone()))
                        .collect(),
                )
            } else {
                None
            }
        })
        .collect();
    // complete a unitary U for numerically null columns
    for j in 0..n {
        if ucols[j].is_some() {
            continue;
        }
        let mut best: Option<(R, Vec<Cplx<R>>)> = None;
        for k in 0..n {
            let mut e: Vec<Cplx<R>> = (0..n)
                .map(|i| cplx::from_f64(if i == k { 1.0 } else { 0.0 }, 0.0, p))
                .collect();
            for _ in 0..2 {
                for u in ucols.iter().flatten() {
                    let d = dot(u, &e, p);
                    for (ei, ui) in e.iter_mut().zip(u) {
                        *ei = ei.clone() - ui.clone() * d.clone();
                    }
                }
            }
            let nr = norm2(&e, p).sqrt();
            if best.as_ref().is_none_or(|(b, _)| nr > *b) {
                best = Some((nr, e));
            }
        }
        let (nr, e) = best.expect("n > 0");
        ucols[j] = Some(
            e.into_iter()
                .map(|z| Cplx::new(z.re / nr.clone(), z.im / nr.clone()))
                .collect(),
        );
    }
    let ucols: Vec<Vec<Cplx<R>>> = ucols.into_iter().map(|c| c.expect("filled")).collect();
    let u = FloatMatrix::from_fn(n, n, |i, j| ucols[j][i].clone());
    SvdCandidate { u, s, v }
}

/// Certified interval `[lo, hi]` for one singular value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularInterval {
    pub lo: Mag,
    pub hi: Mag,
}

#[derive(Clone, Debug)]
pub struct SvdEnclosure {
    /// `≥ ‖I − U*U‖₂`.
    pub alpha: Mag,
    /// `≥ ‖I − V*V‖₂`.
    pub beta: Mag,
    /// `≥ ‖U*AV − D‖₂`.
    pub norm_e: Mag,
    /// One interval per diagonal index; together they contain every singular value.
    pub intervals: Vec<SingularInterval>,
}

impl SvdEnclosure {
    pub fn sigma_min_lower(&self) -> Mag {
        self.intervals.iter().map(|i| i.lo).fold(Mag::INF, Mag::min)
    }
    pub fn sigma_max_upper(&self) -> Mag {
        self.intervals
            .iter()
            .map(|i| i.hi)
            .fold(Mag::ZERO, Mag::max)
    }
}

/// Singular value intervals of every matrix in `a` from candidate factors.
pub fn svd_enclosure<F: BallFloat>(
    a: &BallMatrix<F>,
    u: &FloatMatrix<F>,
    v: &FloatMatrix<F>,
) -> Result<SvdEnclosure, LinalgError> {
    let n = a.rows();
    if a.cols() != n || u.rows() != n || v.rows() != n || u.cols() != n || v.cols() != n {
        return Err(LinalgError::Dimension("svd_enclosure operands".into()));
    }
    let prec = a.prec();
    let alpha = unitarity_defect(u, prec)?;
    if alpha >= one() {
        return Err(LinalgError::NotUnitary {
            what: "U",
            delta: alpha.to_f64_up(),
        });
    }
    let beta = unitarity_defect(v, prec)?;
    if beta >= one() {
        return Err(LinalgError::NotUnitary {
            what: "V",
            delta: beta.to_f64_up(),
        });
    }
    let ub = BallMatrix::from_float(u);
    let vb = BallMatrix::from_float(v);
    let mut e = ub.adjoint().mul(&a.mul(&vb, prec)?, prec)?;
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let z = e.get(i, i).clone();
        let mid = ComplexBall::exact(&z.mid());
        e.set(i, i, z.sub(&mid, prec));
        diag.push(mid);
    }
    let norm_e = e.norm2_upper_mag();
    let lo_den = one().add_up(&alpha).mul_up(&one().add_up(&beta)).sqrt_up();
    let hi_den = one()
        .sub_down(&alpha)
        .mul_down(&one().sub_down(&beta))
        .sqrt_down();
    let intervals = diag
        .iter()
        .map(|z| SingularInterval {
            lo: z.abs_lower().sub_down(&norm_e).div_down(&lo_den),
            hi: z.abs_upper().add_up(&norm_e).div_up(&hi_den),
        })
        .collect();
    Ok(SvdEnclosure {
        alpha,
        beta,
        norm_e,
        intervals,
    })
}

/// Lift an `f64` candidate to the midpoint type of a ball matrix.
pub(crate) fn lift_candidate<F: BallFloat>(m: &FloatMatrix<f64>, prec: u32) -> FloatMatrix<F> {
    m.map(|x| F::from_f64_prec(*x, prec))
}

/// Certified lower bound on `σ_min` of every matrix in `b`, with candidate
/// factors from a double-precision Jacobi SVD. Returns the bound and the
/// candidate `V` for warm starts.
pub fn sigmin_lower_ball<F: BallFloat>(
    b: &BallMatrix<F>,
    warm: Option<&FloatMatrix<f64>>,
) -> (Mag, FloatMatrix<f64>) {
    let prec = b.prec();
    let mid = b.mid().to_f64();
    let cand = jacobi_svd_f64(&mid, warm);
    let u = lift_candidate::<F>(&cand.u, prec);
    let v = lift_candidate::<F>(&cand.v, prec);
    let lo = match svd_enclosure(b, &u, &v) {
        Ok(enc) => enc.sigma_min_lower(),
        Err(_) => Mag::ZERO,
    };
    (lo, cand.v)
}

/// Certified lower bound on `σ_min(zI − T)`.
pub fn sigmin_lower<F: BallFloat>(t: &BallMatrix<F>, z: &ComplexBall<F>) -> Mag {
    match t.shift_neg(z, t.prec()) {
        Ok(b) => sigmin_lower_ball(&b, None).0,
        Err(_) => Mag::ZERO,
    }
}
