//! Singular values by cyclic Jacobi at 256 bits, and dense double-precision
//! resolvent sampling.

use ball_core::rug::Float;
use ball_core::{Ball, BallComplex, BallMatrix, BallReal, ComplexBall, Cplx, FloatMatrix, Mag};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use validated_linalg::{
    approx_schur, certify_schur, contour_resolvent_sup, jacobi_svd_f64, lift_to_matrix_resolvent,
    svd_enclosure, SamplingMode,
};

const P: u32 = 256;
const DENSE: usize = 10_000;
const CASES: usize = 200;

type NaMat = DMatrix<nalgebra::Complex<f64>>;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> FloatMatrix<f64> {
    FloatMatrix::from_fn(n, n, |_, _| {
        Cplx::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
    })
}

fn symmetric_eigenvalues(mut h: Vec<Vec<Float>>) -> Vec<Float> {
    let n = h.len();
    let f = |x: Float| Float::with_val(P, x);
    let tol = Float::with_val(P, Float::u_exp(1, -(P as i32) + 8));
    for _ in 0..100 {
        let mut off = Float::with_val(P, 0);
        for (i, row) in h.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    off += Float::with_val(P, x * x);
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
                    Float::with_val(P, &h[b][b] - &h[a][a]) / Float::with_val(P, 2 * &h[a][b]);
                let root = f(Float::with_val(P, &tau * &tau) + 1u32).sqrt();
                let mut t = Float::with_val(P, 1) / (Float::with_val(P, tau.abs_ref()) + root);
                if tau.is_sign_negative() {
                    t = -t;
                }
                let c = Float::with_val(P, 1) / f(Float::with_val(P, &t * &t) + 1u32).sqrt();
                let s = Float::with_val(P, &t * &c);
                for row in h.iter_mut() {
                    let (x, y) = (row[a].clone(), row[b].clone());
                    row[a] = Float::with_val(P, &c * &x) - Float::with_val(P, &s * &y);
                    row[b] = Float::with_val(P, &s * &x) + Float::with_val(P, &c * &y);
                }
                for k in 0..n {
                    let (x, y) = (h[a][k].clone(), h[b][k].clone());
                    h[a][k] = Float::with_val(P, &c * &x) - Float::with_val(P, &s * &y);
                    h[b][k] = Float::with_val(P, &s * &x) + Float::with_val(P, &c * &y);
                }
            }
        }
    }
    (0..n).map(|i| h[i][i].clone()).collect()
}

/// Singular values, descending, from the real `2n×2n` embedding of `A*A`.
fn oracle_singular_values(a: &FloatMatrix<f64>) -> Vec<f64> {
    let n = a.rows();
    let f = |x: f64| Float::with_val(P, x);
    let mut x = vec![vec![f(0.0); n]; n];
    let mut y = vec![vec![f(0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (ar, ai) = (f(a[(k, i)].re), f(-a[(k, i)].im));
                let (br, bi) = (f(a[(k, j)].re), f(a[(k, j)].im));
                x[i][j] += Float::with_val(P, &ar * &br) - Float::with_val(P, &ai * &bi);
                y[i][j] += Float::with_val(P, &ar * &bi) + Float::with_val(P, &ai * &br);
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

fn to_nalgebra(t: &FloatMatrix<f64>) -> NaMat {
    DMatrix::from_fn(t.rows(), t.cols(), |i, j| {
        nalgebra::Complex::new(t[(i, j)].re, t[(i, j)].im)
    })
}

fn sigmin_shift(t: &NaMat, z: Cplx<f64>) -> f64 {
    let n = t.nrows();
    let zc = nalgebra::Complex::new(z.re, z.im);
    let b = DMatrix::from_fn(
        n,
        n,
        |i, j| if i == j { zc - t[(i, j)] } else { -t[(i, j)] },
    );
    b.singular_values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

fn svd_violations() -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(2020);
    let mut violations = 0;
    let mut values = 0;
    for case in 0..CASES {
        let n = rng.gen_range(1..=8);
        let mid = random_matrix(&mut rng, n, 2.0);
        let rad = if case % 2 == 0 { 0.0 } else { 1e-9 };
        let a = BallMatrix::from_fn(n, n, |i, j| {
            ComplexBall::new(
                Ball::new(mid[(i, j)].re, Mag::from_f64(rad)),
                Ball::new(mid[(i, j)].im, Mag::from_f64(rad)),
            )
        });
        let point = FloatMatrix::from_fn(n, n, |i, j| {
            let d = |rng: &mut ChaCha8Rng| {
                if rad > 0.0 {
                    rng.gen_range(-rad..rad)
                } else {
                    0.0
                }
            };
            let (dr, di) = (d(&mut rng), d(&mut rng));
            Cplx::new(mid[(i, j)].re + dr, mid[(i, j)].im + di)
        });
        let cand = jacobi_svd_f64(&mid, None);
        let Ok(enc) = svd_enclosure(&a, &cand.u, &cand.v) else {
            violations += 1;
            continue;
        };
        let mut iv: Vec<(f64, f64)> = enc
            .intervals
            .iter()
            .map(|i| (i.lo.to_f64_down(), i.hi.to_f64_up()))
            .collect();
        iv.sort_by(|a, b| (b.0 + b.1).partial_cmp(&(a.0 + a.1)).unwrap());
        for (s, (lo, hi)) in oracle_singular_values(&point).iter().zip(&iv) {
            values += 1;
            if !(*lo <= *s && *s <= *hi) {
                violations += 1;
            }
        }
    }
    (values, violations)
}

fn contour_violations() -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(2021);
    let (mut certified, mut violations) = (0, 0);
    for _ in 0..CASES {
        let n = rng.gen_range(1..=8);
        let a = random_matrix(&mut rng, n, 1.0);
        let (q, t) = approx_schur(&a).unwrap();
        let cert = certify_schur(&BallMatrix::from_float(&a), &q, &t).unwrap();
        let c = Cplx::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let rho = rng.gen_range(0.05..1.5);
        let tmp = BallMatrix::from_float(&cert.t.to_mp(64));
        let center = BallComplex::from_f64(c.re, c.im, 64);
        let Ok(cc) = contour_resolvent_sup(
            &tmp,
            &center,
            &BallReal::from_f64(rho, 64),
            256,
            SamplingMode::Full,
        ) else {
            continue;
        };
        let Ok(lifted) = lift_to_matrix_resolvent(&cert, &cc) else {
            continue;
        };
        certified += 1;
        let m_t = cc.m_t_mag().to_f64_up();
        let m_a = lifted.m_a_mag().unwrap().to_f64_up();
        let (tn, an) = (to_nalgebra(&cert.t), to_nalgebra(&a));
        let (mut sup_t, mut sup_a) = (0.0f64, 0.0f64);
        for l in 0..DENSE {
            let th = std::f64::consts::TAU * (l as f64 + 0.5) / DENSE as f64;
            let z = c + Cplx::new(rho * th.cos(), rho * th.sin());
            sup_t = sup_t.max(1.0 / sigmin_shift(&tn, z));
            sup_a = sup_a.max(1.0 / sigmin_shift(&an, z));
        }
        if sup_t > m_t * (1.0 + 1e-9) || sup_a > m_a * (1.0 + 1e-9) {
            violations += 1;
        }
    }
    (certified, violations)
}

pub fn soundness_suite() -> Result<String, String> {
    let (values, bad_svd) = svd_violations();
    let (certified, bad_contour) = contour_violations();
    let msg = format!(
        "{CASES} svd cases ({values} singular values, {bad_svd} violations), \
         {certified}/{CASES} contours vs {DENSE}-point sampling ({bad_contour} violations)"
    );
    if bad_svd == 0 && bad_contour == 0 && certified >= CASES / 2 {
        Ok(msg)
    } else {
        Err(msg)
    }
}
