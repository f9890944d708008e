#![allow(dead_code)]

use ball_core::{Cplx, FloatMatrix, FloatMatrixF64};
use dfly_bounds::TwoNormExample;
use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex<f64>>;

pub fn to_na(x: &FloatMatrixF64) -> CMat {
    DMatrix::from_fn(x.rows(), x.cols(), |i, j| {
        Complex::new(x[(i, j)].re, x[(i, j)].im)
    })
}

/// `(zI − X)^{-1}` by direct inversion.
pub fn resolvent(x: &FloatMatrixF64, z: Complex<f64>) -> Option<CMat> {
    let n = x.rows();
    (CMat::identity(n, n) * z - to_na(x)).try_inverse()
}

pub fn norm_ss(r: &CMat, w: &[f64]) -> f64 {
    (0..r.nrows())
        .map(|i| {
            (0..r.ncols())
                .map(|j| r[(i, j)].norm() * w[i] / w[j])
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

pub fn norm_sw(r: &CMat, w: &[f64]) -> f64 {
    (0..r.nrows())
        .map(|i| (0..r.ncols()).map(|j| r[(i, j)].norm() / w[j]).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn norm_ww(r: &CMat) -> f64 {
    (0..r.nrows())
        .map(|i| (0..r.ncols()).map(|j| r[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Random upper-triangular `L` of size `n` with a random perturbation of
/// scale `s` (full matrix), weights `3^i`.
pub fn random_example(rng: &mut ChaCha8Rng, n: usize, s: f64) -> TwoNormExample {
    let l = FloatMatrix::from_fn(n, n, |i, j| {
        let v = if i == j {
            rng.gen_range(0.05..1.0) * if rng.gen_bool(0.2) { -1.0 } else { 1.0 }
        } else if j > i {
            rng.gen_range(-0.3..0.3)
        } else {
            0.0
        };
        Cplx::new(v, 0.0)
    });
    let lk = FloatMatrix::from_fn(n, n, |i, j| {
        Cplx::new(l[(i, j)].re + s * rng.gen_range(-1.0..1.0), 0.0)
    });
    let weights = (0..n).map(|i| 3f64.powi(i as i32)).collect();
    TwoNormExample {
        l,
        lk,
        weights,
        center: 1.0,
        radius: 0.25,
    }
}

pub fn random_z(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> Complex<f64> {
    let r = rng.gen_range(rmin..rmax);
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex::new(r * t.cos(), r * t.sin())
}

/// Oracle value inflated by a relative `1e-12`, so it can serve as a
/// certified upper input.
pub fn inflate(x: f64) -> f64 {
    x * (1.0 + 1e-12)
}

/// Eigenvalues of the real part of `x`.
pub fn eigenvalues(x: &FloatMatrixF64) -> Vec<Complex<f64>> {
    DMatrix::from_fn(x.rows(), x.cols(), |i, j| x[(i, j)].re)
        .complex_eigenvalues()
        .iter()
        .cloned()
        .collect()
}
