//! Candidate complex Schur forms and their certified defects.

use ball_core::{cabs, conj, BallFloat, BallMatrix, BallReal, Cplx, FloatMatrix, Mag, RealScalar};

use crate::bound::{ball_of_mag, one};
use crate::cplx;
use crate::LinalgError;

/// Apply `[[c, s], [−s̄, c]]` to rows `k, k+1` over columns `cols`.
pub(crate) fn rot_rows<R: RealScalar>(
    h: &mut FloatMatrix<R>,
    k: usize,
    c: &R,
    s: &Cplx<R>,
    cols: std::ops::Range<usize>,
) {
    let sb = conj(s);
    for j in cols {
        let x = h[(k, j)].clone();
        let y = h[(k + 1, j)].clone();
        h[(k, j)] = x.clone() * c.clone() + s.clone() * y.clone();
        h[(k + 1, j)] = y * c.clone() - sb.clone() * x;
    }
}

/// Multiply columns `k, k+1` from the right by `[[c, −s], [s̄, c]]` over `rows`.
pub(crate) fn rot_cols<R: RealScalar>(
    h: &mut FloatMatrix<R>,
    k: usize,
    c: &R,
    s: &Cplx<R>,
    rows: std::ops::Range<usize>,
) {
    let sb = conj(s);
    for i in rows {
        let x = h[(i, k)].clone();
        let y = h[(i, k + 1)].clone();
        h[(i, k)] = x.clone() * c.clone() + sb.clone() * y.clone();
        h[(i, k + 1)] = y * c.clone() - s.clone() * x;
    }
}

fn hessenberg<R: RealScalar>(h: &mut FloatMatrix<R>, q: &mut FloatMatrix<R>) {
    let n = h.rows();
    let p = h.prec();
    let two = R::from_f64_prec(2.0, p);
    for j in 0..n.saturating_sub(2) {
        let mut v: Vec<Cplx<R>> = (j + 1..n).map(|i| h[(i, j)].clone()).collect();
        let nx = v
            .iter()
            .fold(R::from_f64_prec(0.0, p), |s, z| s + cplx::abs2(z))
            .sqrt();
        if nx.is_zero() {
            continue;
        }
        let alpha = cplx::phase(&v[0]) * (-nx);
        v[0] = v[0].clone() - alpha.clone();
        let nv2 = v
            .iter()
            .fold(R::from_f64_prec(0.0, p), |s, z| s + cplx::abs2(z));
        if nv2.is_zero() {
            continue;
        }
        let f = two.clone() / nv2;
        for c in j..n {
            let mut w = cplx::zero::<R>(p);
            for (i, vi) in v.iter().enumerate() {
                w += conj(vi) * h[(j + 1 + i, c)].clone();
            }
            let w = w * f.clone();
            for (i, vi) in v.iter().enumerate() {
                let t = h[(j + 1 + i, c)].clone() - vi.clone() * w.clone();
                h[(j + 1 + i, c)] = t;
            }
        }
        for m in [&mut *h, &mut *q] {
            for r in 0..n {
                let mut w = cplx::zero::<R>(p);
                for (i, vi) in v.iter().enumerate() {
                    w += m[(r, j + 1 + i)].clone() * vi.clone();
                }
                let w = w * f.clone();
                for (i, vi) in v.iter().enumerate() {
                    let t = m[(r, j + 1 + i)].clone() - w.clone() * conj(vi);
                    m[(r, j + 1 + i)] = t;
                }
            }
        }
        h[(j + 1, j)] = alpha;
        for i in j + 2..n {
            h[(i, j)] = cplx::zero(p);
        }
    }
}

/// Eigenvalue of the trailing 2×2 block closest to its last diagonal entry.
fn wilkinson<R: RealScalar>(h: &FloatMatrix<R>, k: usize) -> Cplx<R> {
    let p = h.prec();
    let a = h[(k - 1, k - 1)].clone();
    let b = h[(k - 1, k)].clone();
    let c = h[(k, k - 1)].clone();
    let d = h[(k, k)].clone();
    let half = R::from_f64_prec(0.5, p);
    let hd = (a.clone() - d.clone()) * half.clone();
    let disc = cplx::sqrt(&(hd.clone() * hd.clone() + b * c));
    let m = (a + d.clone()) * half;
    let e1 = m.clone() + disc.clone();
    let e2 = m - disc;
    if cabs(&(e1.clone() - d.clone())) <= cabs(&(e2.clone() - d)) {
        e1
    } else {
        e2
    }
}

/// Unvalidated complex Schur decomposition `A ≈ Q T Q*` by Hessenberg
/// reduction and single-shift QR with Givens rotations, at the precision of
/// the entries of `a`.
pub fn approx_schur<R: RealScalar>(
    a: &FloatMatrix<R>,
) -> Result<(FloatMatrix<R>, FloatMatrix<R>), LinalgError> {
    let n = a.rows();
    if !a.is_square() {
        return Err(LinalgError::Dimension(format!(
            "{}x{} is not square",
            n,
            a.cols()
        )));
    }
    let p = a.prec();
    let mut h = a.clone();
    let mut q = FloatMatrix::identity(n, p);
    if n <= 1 {
        return Ok((q, h));
    }
    hessenberg(&mut h, &mut q);
    let fro = R::from_f64_prec(h.frobenius_f64().max(f64::MIN_POSITIVE), p);
    let tol = R::epsilon_at(p) * fro;
    let cap = 60 * n;
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut iter = 0usize;
    while hi > 0 {
        // find the active window [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            if cabs(&h[(lo, lo - 1)]) <= tol {
                h[(lo, lo - 1)] = cplx::zero(p);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        total += 1;
        iter += 1;
        if total > cap {
            return Err(LinalgError::NoConvergence(total));
        }
        let mu = if iter % 11 == 10 {
            h[(hi, hi)].clone() + cplx::from_f64::<R>(0.75, 0.0, p) * cabs(&h[(hi, hi - 1)])
        } else {
            wilkinson(&h, hi)
        };
        for k in lo..=hi {
            h[(k, k)] = h[(k, k)].clone() - mu.clone();
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = cplx::givens(&h[(k, k)], &h[(k + 1, k)]);
            rot_rows(&mut h, k, &c, &s, k..n);
            h[(k + 1, k)] = cplx::zero(p);
            rots.push((c, s));
        }
        for (i, (c, s)) in rots.iter().enumerate() {
            let k = lo + i;
            rot_cols(&mut h, k, c, s, 0..(k + 2).min(hi + 1));
            rot_cols(&mut q, k, c, s, 0..n);
        }
        for k in lo..=hi {
            h[(k, k)] = h[(k, k)].clone() + mu.clone();
        }
    }
    Ok((q, h))
}

/// Certified defects of a candidate Schur pair.
#[derive(Clone, Debug)]
pub struct SchurCertificate<F: BallFloat> {
    pub q: FloatMatrix<F>,
    /// Upper-triangular part of the candidate `T`.
    pub t: FloatMatrix<F>,
    /// `≥ ‖I − Q*Q‖₂`.
    pub delta: BallReal,
    /// `≥ ‖AQ − QT‖₂`.
    pub r_sch: BallReal,
    /// `≥ ‖A‖₂`.
    pub c_a: BallReal,
    /// `≥ κ(Q)`.
    pub kappa_q: BallReal,
    /// `≥ ‖A − QTQ*‖₂`.
    pub norm_e: BallReal,
}

impl<F: BallFloat> SchurCertificate<F> {
    pub fn delta_mag(&self) -> Mag {
        self.delta.mag_upper()
    }
    pub fn r_sch_mag(&self) -> Mag {
        self.r_sch.mag_upper()
    }
    pub fn kappa_mag(&self) -> Mag {
        self.kappa_q.mag_upper()
    }
    pub fn norm_e_mag(&self) -> Mag {
        self.norm_e.mag_upper()
    }
    /// `≥ ‖Q^{-1} A Q − T‖₂ ≤ r_sch / √(1 − δ)`.
    pub fn similarity_defect(&self) -> Mag {
        self.r_sch_mag()
            .div_up(&one().sub_down(&self.delta_mag()).sqrt_down())
    }
}

/// `δ ≥ ‖I − X*X‖₂` for a candidate `X`.
pub fn unitarity_defect<F: BallFloat>(x: &FloatMatrix<F>, prec: u32) -> Result<Mag, LinalgError> {
    let xb = BallMatrix::from_float(x);
    Ok(xb
        .adjoint()
        .mul(&xb, prec)?
        .identity_minus(prec)?
        .norm2_upper_mag())
}

/// `‖I − X*X‖` bound, the residual `‖AX − XT‖` and the derived `‖E‖`, `κ`.
pub fn certify_schur<F: BallFloat>(
    a: &BallMatrix<F>,
    q: &FloatMatrix<F>,
    t: &FloatMatrix<F>,
) -> Result<SchurCertificate<F>, LinalgError> {
    let n = a.rows();
    if a.cols() != n || q.rows() != n || q.cols() != n || t.rows() != n || t.cols() != n {
        return Err(LinalgError::Dimension("certify_schur operands".into()));
    }
    let prec = a.prec();
    let tt = t.upper_triangular();
    let qb = BallMatrix::from_float(q);
    let tb = BallMatrix::from_float(&tt);
    let delta = unitarity_defect(q, prec)?;
    if delta >= one() {
        return Err(LinalgError::NotUnitary {
            what: "Q",
            delta: delta.to_f64_up(),
        });
    }
    let r_sch = a
        .mul(&qb, prec)?
        .sub(&qb.mul(&tb, prec)?, prec)?
        .norm2_upper_mag();
    let c_a = a.norm2_upper_mag();
    let norm_e = r_sch
        .mul_up(&one().add_up(&delta).sqrt_up())
        .add_up(&c_a.mul_up(&delta));
    let kappa = one()
        .add_up(&delta)
        .div_up(&one().sub_down(&delta))
        .sqrt_up();
    Ok(SchurCertificate {
        q: q.clone(),
        t: tt,
        delta: ball_of_mag(delta),
        r_sch: ball_of_mag(r_sch),
        c_a: ball_of_mag(c_a),
        kappa_q: ball_of_mag(kappa),
        norm_e: ball_of_mag(norm_e),
    })
}
