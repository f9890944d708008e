#![allow(dead_code)]

use ball_core::{Cplx, FloatMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::Float;

pub const ORACLE_PREC: u32 = 256;

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> FloatMatrix<f64> {
    FloatMatrix::from_fn(n, n, |_, _| {
        Cplx::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
    })
}

pub fn random_upper(rng: &mut ChaCha8Rng, n: usize) -> FloatMatrix<f64> {
    FloatMatrix::from_fn(n, n, |i, j| {
        if i <= j {
            Cplx::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        } else {
            Cplx::new(0.0, 0.0)
        }
    })
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi at `ORACLE_PREC` bits.
fn symmetric_eigenvalues(mut h: Vec<Vec<Float>>) -> Vec<Float> {
    let n = h.len();
    let p = ORACLE_PREC;
    let tol = Float::with_val(p, Float::u_exp(1, -(p as i32) + 8));
    for _ in 0..100 {
        let mut off = Float::with_val(p, 0);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += Float::with_val(p, &h[i][j] * &h[i][j]);
                }
            }
        }
        if off <= tol {
            break;
        }
        for a in 0..n {
            for b in a + 1..n {
                if h[a][b].is_zero() {
                    continue;
                }
                let tau =
                    Float::with_val(p, &h[b][b] - &h[a][a]) / Float::with_val(p, 2 * &h[a][b]);
                let root = Float::with_val(p, Float::with_val(p, &tau * &tau) + 1u32).sqrt();
                let mut t = Float::with_val(p, 1) / (Float::with_val(p, tau.abs_ref()) + root);
                if tau.is_sign_negative() {
                    t = -t;
                }
                let c = Float::with_val(p, 1)
                    / Float::with_val(p, Float::with_val(p, &t * &t) + 1u32).sqrt();
                let s = Float::with_val(p, &t * &c);
                for k in 0..n {
                    let x = h[k][a].clone();
                    let y = h[k][b].clone();
                    h[k][a] = Float::with_val(p, &c * &x) - Float::with_val(p, &s * &y);
                    h[k][b] = Float::with_val(p, &s * &x) + Float::with_val(p, &c * &y);
                }
                for k in 0..n {
                    let x = h[a][k].clone();
                    let y = h[b][k].clone();
                    h[a][k] = Float::with_val(p, &c * &x) - Float::with_val(p, &s * &y);
                    h[b][k] = Float::with_val(p, &s * &x) + Float::with_val(p, &c * &y);
                }
            }
        }
    }
    (0..n).map(|i| h[i][i].clone()).collect()
}

/// Singular values of a complex `f64` matrix: eigenvalues of `A*A` through
/// its real symmetric `2n×2n` embedding, each appearing twice.
pub fn oracle_singular_values(a: &FloatMatrix<f64>) -> Vec<f64> {
    let n = a.rows();
    let p = ORACLE_PREC;
    let f = |x: f64| Float::with_val(p, x);
    // H = A*A = X + iY, exact at this precision
    let mut x = vec![vec![f(0.0); n]; n];
    let mut y = vec![vec![f(0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (ar, ai) = (f(a[(k, i)].re), f(-a[(k, i)].im));
                let (br, bi) = (f(a[(k, j)].re), f(a[(k, j)].im));
                x[i][j] += Float::with_val(p, &ar * &br) - Float::with_val(p, &ai * &bi);
                y[i][j] += Float::with_val(p, &ar * &bi) + Float::with_val(p, &ai * &br);
            }
        }
    }
    let mut h = vec![vec![f(0.0); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            h[i][j] = x[i][j].clone();
            h[i + n][j + n] = x[i][j].clone();
            h[i][j + n] = -y[i][j].clone();
            h[i + n][j] = y[i][j].clone();
        }
    }
    let mut ev: Vec<f64> = symmetric_eigenvalues(h)
        .into_iter()
        .map(|e| e.to_f64().max(0.0).sqrt())
        .collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev.into_iter().step_by(2).collect()
}

/// `σ_min(zI − T)` for a point `z` via the high-precision oracle.
pub fn oracle_sigmin_shift(t: &FloatMatrix<f64>, z: Cplx<f64>) -> f64 {
    let n = t.rows();
    let b = FloatMatrix::from_fn(n, n, |i, j| if i == j { z - t[(i, j)] } else { -t[(i, j)] });
    *oracle_singular_values(&b).last().unwrap()
}

/// `σ_min(zI − T)` in double precision via nalgebra, for dense sampling.
pub fn nalgebra_sigmin_shift(t: &nalgebra::DMatrix<nalgebra::Complex<f64>>, z: Cplx<f64>) -> f64 {
    let n = t.nrows();
    let zc = nalgebra::Complex::new(z.re, z.im);
    let b = nalgebra::DMatrix::from_fn(
        n,
        n,
        |i, j| if i == j { zc - t[(i, j)] } else { -t[(i, j)] },
    );
    b.singular_values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

pub fn to_nalgebra(t: &FloatMatrix<f64>) -> nalgebra::DMatrix<nalgebra::Complex<f64>> {
    nalgebra::DMatrix::from_fn(t.rows(), t.cols(), |i, j| {
        nalgebra::Complex::new(t[(i, j)].re, t[(i, j)].im)
    })
}
