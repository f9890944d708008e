//! Direct-inversion oracles for the strong/weak resolvent bounds on random
//! upper-triangular pairs.

use ball_core::{BallComplex, BallReal, Cplx, FloatMatrix, FloatMatrixF64};
use dfly_bounds::{
    default_family, dfly_convergence_suite, growth_bound, rk_minus_r_bound, true_to_fine,
    weak_to_strong, TwoNormExample, PREC,
};
use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type CMat = DMatrix<Complex<f64>>;

const TOL: f64 = 1e-9;
const CASES: usize = 100;

fn resolvent(x: &FloatMatrixF64, z: Complex<f64>) -> Option<CMat> {
    let n = x.rows();
    let a = DMatrix::from_fn(n, n, |i, j| Complex::new(x[(i, j)].re, x[(i, j)].im));
    (CMat::identity(n, n) * z - a).try_inverse()
}

fn row_max(r: &CMat, f: impl Fn(usize, usize) -> f64) -> f64 {
    (0..r.nrows())
        .map(|i| {
            (0..r.ncols())
                .map(|j| r[(i, j)].norm() * f(i, j))
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

fn norm_ss(r: &CMat, w: &[f64]) -> f64 {
    row_max(r, |i, j| w[i] / w[j])
}

fn norm_sw(r: &CMat, w: &[f64]) -> f64 {
    row_max(r, |_, j| 1.0 / w[j])
}

fn norm_ww(r: &CMat) -> f64 {
    row_max(r, |_, _| 1.0)
}

fn random_example(rng: &mut ChaCha8Rng, n: usize, s: f64) -> TwoNormExample {
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

fn random_z(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> Complex<f64> {
    let r = rng.gen_range(rmin..rmax);
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex::new(r * t.cos(), r * t.sin())
}

/// Oracle value as a certified upper input.
fn inflated(x: f64) -> BallReal {
    BallReal::from_f64(x * (1.0 + 1e-12), PREC)
}

fn zb(z: Complex<f64>) -> BallComplex {
    BallComplex::from_f64(z.re, z.im, PREC)
}

#[derive(Default)]
struct Tally {
    checked: usize,
    bad: usize,
}

impl Tally {
    fn record(&mut self, bound: f64, truth: f64) {
        self.checked += 1;
        if bound < truth * (1.0 - TOL) {
            self.bad += 1;
        }
    }

    fn fail(&mut self) {
        self.checked += 1;
        self.bad += 1;
    }

    fn ok(&self) -> bool {
        self.checked >= CASES && self.bad == 0
    }
}

fn run(seed: u64, mut case: impl FnMut(&mut ChaCha8Rng, &mut Tally)) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    for _ in 0..20_000 {
        if t.checked >= 2 * CASES {
            break;
        }
        case(&mut rng, &mut t);
    }
    t
}

fn weak_to_strong_cases() -> Tally {
    run(11, |rng, t| {
        let s = rng.gen_range(1e-4..1e-2);
        let ex = random_example(rng, 3, s);
        let c = ex.constants().unwrap();
        let z = random_z(rng, 0.3, 3.0);
        let Some(rk) = resolvent(&ex.lk, z) else {
            return;
        };
        let Ok(bound) = weak_to_strong(&zb(z), &c, &inflated(norm_ww(&rk))) else {
            return;
        };
        let Some(r) = resolvent(&ex.l, z) else {
            // a certified z inside the spectrum of L
            t.fail();
            return;
        };
        t.record(bound.upper_f64(), norm_ss(&r, &ex.weights));
    })
}

fn rk_minus_r_cases() -> Tally {
    run(12, |rng, t| {
        let s = rng.gen_range(1e-4..1e-1);
        let ex = random_example(rng, 3, s);
        let z = random_z(rng, 0.3, 3.0);
        let (Some(rk), Some(r)) = (resolvent(&ex.lk, z), resolvent(&ex.l, z)) else {
            return;
        };
        let c = ex.constants().unwrap();
        let mk = inflated(norm_ww(&rk));
        let ks = inflated(norm_ss(&r, &ex.weights));
        let bound = rk_minus_r_bound(&mk, &c.delta_k, &ks);
        t.record(bound.upper_f64(), norm_sw(&(rk - r), &ex.weights));
    })
}

fn true_to_fine_cases() -> Tally {
    run(13, |rng, t| {
        let s = rng.gen_range(1e-4..1e-1);
        let ex = random_example(rng, 3, s);
        let c = ex.constants().unwrap();
        let z = random_z(rng, 0.3, 3.0);
        if z.norm() <= c.a.upper_f64() {
            return;
        }
        let (Some(rk), Some(r)) = (resolvent(&ex.lk, z), resolvent(&ex.l, z)) else {
            return;
        };
        let n = rng.gen_range(1..=6);
        let Ok(bound) = true_to_fine(&zb(z), n, &c, &inflated(norm_ss(&r, &ex.weights))) else {
            return;
        };
        t.record(bound.upper_f64(), norm_ww(&rk));
    })
}

fn growth_cases() -> Tally {
    run(14, |rng, t| {
        let s = rng.gen_range(1e-5..1e-2);
        let ex = random_example(rng, 3, s);
        let Ok(c) = ex.constants() else { return };
        if c.n_k().is_err() {
            return;
        }
        let z = random_z(rng, c.mu.upper_f64() * (1.0 + 1e-9), 3.0);
        let (Some(rk), Some(r)) = (resolvent(&ex.lk, z), resolvent(&ex.l, z)) else {
            return;
        };
        let Ok(g) = growth_bound(&c, &inflated(norm_ss(&r, &ex.weights))) else {
            return;
        };
        t.record(g.upper_f64(), norm_ww(&rk));
    })
}

pub fn property_suite() -> Result<String, String> {
    let tallies = [
        ("weak_to_strong", weak_to_strong_cases()),
        ("rk_minus_r", rk_minus_r_cases()),
        ("true_to_fine", true_to_fine_cases()),
        ("growth", growth_cases()),
    ];
    let report = dfly_convergence_suite("default", 10, default_family);
    let from = report.passing_from();
    let stable = report.multiplicity_stable();
    let parts: Vec<String> = tallies
        .iter()
        .map(|(n, t)| format!("{n} {}/{} bad", t.bad, t.checked))
        .collect();
    let msg = format!(
        "{}; suite passes from k = {from:?}, multiplicity stable: {stable}",
        parts.join(", ")
    );
    if tallies.iter().all(|(_, t)| t.ok()) && from.is_some() && stable {
        Ok(msg)
    } else {
        Err(msg)
    }
}
