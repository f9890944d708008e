//! Small matrices with a weighted-max strong norm and a plain-max weak norm.

use ball_core::{BallMatrixMp, BallReal, Cplx, FloatMatrix, FloatMatrixF64};

use crate::constants::DflyConstants;
use crate::{upper_ball, DflyError, PREC};

/// `L`, its approximation `L_k`, the strong weights `w` and a circle
/// `|z − center| = radius`. Strong norm `max_i w_i |u_i|`, weak norm
/// `max_i |u_i|`.
#[derive(Clone, Debug)]
pub struct TwoNormExample {
    pub l: FloatMatrixF64,
    pub lk: FloatMatrixF64,
    pub weights: Vec<f64>,
    pub center: f64,
    pub radius: f64,
}

fn real_matrix(rows: &[&[f64]]) -> FloatMatrixF64 {
    let n = rows.len();
    FloatMatrix::from_fn(n, rows[0].len(), |i, j| Cplx::new(rows[i][j], 0.0))
}

fn re(m: &FloatMatrixF64, i: usize, j: usize) -> BallReal {
    BallReal::from_f64(m[(i, j)].re, PREC).abs()
}

fn w(x: f64) -> BallReal {
    BallReal::from_f64(x, PREC)
}

fn max_upper(v: impl IntoIterator<Item = BallReal>) -> BallReal {
    v.into_iter()
        .fold(BallReal::zero(PREC), |acc, x| acc.max_upper(&x))
}

/// The default family `L_k = L + 2^{-k} P` with weights `(1, 4, 16, 64)`.
pub fn default_family(k: u32) -> TwoNormExample {
    let l = real_matrix(&[
        &[1.0, 0.3, -0.2, 0.1],
        &[0.0, 0.5, 0.2, -0.1],
        &[0.0, 0.0, 0.25, 0.15],
        &[0.0, 0.0, 0.0, 0.1],
    ]);
    let p = real_matrix(&[
        &[0.5, -1.0, 1.0, 0.5],
        &[1.0, 0.5, -1.0, 1.0],
        &[-0.5, 0.5, 0.5, -0.5],
        &[0.25, -0.25, 0.5, 0.5],
    ]);
    let s = (-(k as f64)).exp2();
    let lk = FloatMatrix::from_fn(4, 4, |i, j| Cplx::new(l[(i, j)].re + s * p[(i, j)].re, 0.0));
    TwoNormExample {
        l,
        lk,
        weights: vec![1.0, 4.0, 16.0, 64.0],
        center: 1.0,
        radius: 0.25,
    }
}

impl TwoNormExample {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `‖X‖_{s→s} = max_i Σ_j |x_ij| w_i / w_j`.
    pub fn norm_ss(&self, x: &FloatMatrixF64) -> BallReal {
        let n = self.dim();
        max_upper((0..n).map(|i| {
            (0..n).fold(BallReal::zero(PREC), |s, j| {
                s.add(
                    &re(x, i, j)
                        .mul(&w(self.weights[i]), PREC)
                        .div(&w(self.weights[j]), PREC)
                        .unwrap(),
                    PREC,
                )
            })
        }))
    }

    /// `‖X‖_{s→w} = max_i Σ_j |x_ij| / w_j`.
    pub fn norm_sw(&self, x: &FloatMatrixF64) -> BallReal {
        let n = self.dim();
        max_upper((0..n).map(|i| {
            (0..n).fold(BallReal::zero(PREC), |s, j| {
                s.add(&re(x, i, j).div(&w(self.weights[j]), PREC).unwrap(), PREC)
            })
        }))
    }

    /// `‖X‖_{w→w}`, the maximal row sum.
    pub fn norm_ww(&self, x: &FloatMatrixF64) -> BallReal {
        let n = self.dim();
        max_upper(
            (0..n).map(|i| (0..n).fold(BallReal::zero(PREC), |s, j| s.add(&re(x, i, j), PREC))),
        )
    }

    /// One-step constants of `X` for the split at column 0:
    /// `a = max_i Σ_{j≥1} |x_ij| w_i/w_j`, `b = max_i |x_i0| w_i`.
    pub fn one_step(&self, x: &FloatMatrixF64) -> (BallReal, BallReal) {
        let n = self.dim();
        let a = max_upper((0..n).map(|i| {
            (1..n).fold(BallReal::zero(PREC), |s, j| {
                s.add(
                    &re(x, i, j)
                        .mul(&w(self.weights[i]), PREC)
                        .div(&w(self.weights[j]), PREC)
                        .unwrap(),
                    PREC,
                )
            })
        }));
        let b = max_upper((0..n).map(|i| re(x, i, 0).mul(&w(self.weights[i]), PREC)));
        (a, b)
    }

    pub fn difference(&self) -> FloatMatrixF64 {
        let n = self.dim();
        FloatMatrix::from_fn(n, n, |i, j| {
            Cplx::new(self.l[(i, j)].re - self.lk[(i, j)].re, 0.0)
        })
    }

    /// Lower bound on `inf |z|` over the circle.
    pub fn inf_abs_z(&self) -> BallReal {
        let d = w(self.center.abs()).sub(&w(self.radius), PREC);
        BallReal::from_f64(d.lower_f64(), PREC)
    }

    /// Constants valid for both `L` and `L_k`. `μ` is `inf |z|` on the
    /// circle when it lies in `(a, M)`, otherwise the midpoint of `(a, M)`.
    pub fn constants(&self) -> Result<DflyConstants, DflyError> {
        let (a1, b1) = self.one_step(&self.l);
        let (a2, b2) = self.one_step(&self.lk);
        let a = upper_ball(&a1.max_upper(&a2));
        let b = upper_ball(&b1.max_upper(&b2));
        let m = upper_ball(&self.norm_ww(&self.l).max_upper(&self.norm_ww(&self.lk)));
        let wmin = self.weights.iter().cloned().fold(f64::INFINITY, f64::min);
        let wmax = self.weights.iter().cloned().fold(0.0, f64::max);
        if !(wmin > 0.0) {
            return Err(DflyError::Domain("weights must be positive".into()));
        }
        let e_sw = w(1.0).div(&w(wmin), PREC)?;
        let e_kws = w(wmax);
        let delta_k = upper_ball(&self.norm_sw(&self.difference()));
        let r = self.inf_abs_z();
        let mu = if a.lt(&r) && r.lt(&m) {
            r
        } else {
            BallReal::from_f64((a.mid_f64() + m.mid_f64()) / 2.0, PREC)
        };
        Ok(DflyConstants {
            a,
            b,
            m,
            e_sw,
            e_kws,
            delta_k,
            mu,
        })
    }

    /// `L_k` as a ball matrix.
    pub fn lk_ball(&self, prec: u32) -> BallMatrixMp {
        ball_core::BallMatrix::from_float(&self.lk.to_mp(prec))
    }
}
