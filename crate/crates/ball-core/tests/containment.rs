//! Inclusion isotonicity: for random points inside operand balls, the
//! high-precision value of the operation lies inside the output ball.

use ball_core::{BallComplex, BallReal, Mag, MpFloat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

const CASES: usize = 10_000;
const HI: u32 = 1200;

fn random_ball(rng: &mut impl Rng, prec: u32, lo: f64, hi: f64) -> BallReal {
    let m: f64 = rng.gen_range(lo..hi);
    let scale = 10f64.powi(-rng.gen_range(0..12));
    let mid = Float::with_val(prec, m) + Float::with_val(prec, rng.gen_range(-1.0..1.0) * 1e-20);
    let r = if rng.gen_bool(0.2) {
        0.0
    } else {
        m.abs() * scale * rng.gen_range(0.0..0.5)
    };
    BallReal::new(MpFloat(Float::with_val(prec, mid)), Mag::from_f64(r))
}

/// A point of the ball, exact at high precision.
fn point(rng: &mut impl Rng, b: &BallReal) -> Float {
    let t: f64 = rng.gen_range(-1.0..=1.0);
    let r = b.rad().to_f64_down();
    Float::with_val(HI, &b.mid().0) + Float::with_val(HI, t) * Float::with_val(HI, r)
}

fn exact(x: Float) -> BallReal {
    BallReal::from_float(x)
}

fn check_unary(
    name: &str,
    lo: f64,
    hi: f64,
    op: impl Fn(&BallReal, u32) -> Option<BallReal>,
    f: impl Fn(&Float) -> Float,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(name.len() as u64 * 7919);
    let mut checked = 0;
    for i in 0..CASES {
        let prec = [53, 64, 128, 256][i % 4];
        let a = random_ball(&mut rng, prec, lo, hi);
        let Some(out) = op(&a, prec) else { continue };
        let x = point(&mut rng, &a);
        let y = f(&x);
        assert!(
            out.contains(&exact(y.clone())),
            "{name} case {i}: {a:?} -> {out:?} misses {y}"
        );
        checked += 1;
    }
    assert!(
        checked > CASES / 2,
        "{name}: too few checked cases ({checked})"
    );
}

fn check_binary(
    name: &str,
    lo: f64,
    hi: f64,
    op: impl Fn(&BallReal, &BallReal, u32) -> Option<BallReal>,
    f: impl Fn(&Float, &Float) -> Float,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(name.len() as u64 * 104729);
    let mut checked = 0;
    for i in 0..CASES {
        let prec = [53, 64, 128, 256][i % 4];
        let a = random_ball(&mut rng, prec, lo, hi);
        let b = random_ball(&mut rng, prec, lo, hi);
        let Some(out) = op(&a, &b, prec) else {
            continue;
        };
        let x = point(&mut rng, &a);
        let y = point(&mut rng, &b);
        let z = f(&x, &y);
        assert!(
            out.contains(&exact(z.clone())),
            "{name} case {i}: {a:?},{b:?} -> {out:?} misses {z}"
        );
        checked += 1;
    }
    assert!(
        checked > CASES / 2,
        "{name}: too few checked cases ({checked})"
    );
}

#[test]
fn add_sub_mul_div() {
    check_binary(
        "add",
        -1e6,
        1e6,
        |a, b, p| Some(a.add(b, p)),
        |x, y| Float::with_val(HI, x + y),
    );
    check_binary(
        "sub",
        -1e6,
        1e6,
        |a, b, p| Some(a.sub(b, p)),
        |x, y| Float::with_val(HI, x - y),
    );
    check_binary(
        "mul",
        -1e3,
        1e3,
        |a, b, p| Some(a.mul(b, p)),
        |x, y| Float::with_val(HI, x * y),
    );
    check_binary(
        "div",
        -1e3,
        1e3,
        |a, b, p| a.div(b, p).ok(),
        |x, y| Float::with_val(HI, x / y),
    );
}

#[test]
fn sqrt_exp_log_sin() {
    check_unary(
        "sqrt",
        0.0,
        1e4,
        |a, p| a.sqrt(p).ok(),
        |x| Float::with_val(HI, x.sqrt_ref()),
    );
    check_unary(
        "exp",
        -50.0,
        50.0,
        |a, p| Some(a.exp(p)),
        |x| Float::with_val(HI, x.exp_ref()),
    );
    check_unary(
        "log",
        1e-6,
        1e6,
        |a, p| a.log(p).ok(),
        |x| Float::with_val(HI, x.ln_ref()),
    );
    check_unary(
        "sin",
        -100.0,
        100.0,
        |a, p| Some(a.sin(p)),
        |x| Float::with_val(HI, x.sin_ref()),
    );
}

#[test]
fn pow_real() {
    check_binary(
        "pow",
        0.1,
        5.0,
        |a, b, p| a.pow(b, p).ok(),
        |x, y| {
            let l = Float::with_val(HI, x.ln_ref());
            Float::with_val(HI, (l * y).exp_ref())
        },
    );
}

#[test]
fn complex_mul_div() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..CASES {
        let prec = [64, 128][i % 2];
        let z = BallComplex::new(
            random_ball(&mut rng, prec, -10.0, 10.0),
            random_ball(&mut rng, prec, -10.0, 10.0),
        );
        let w = BallComplex::new(
            random_ball(&mut rng, prec, -10.0, 10.0),
            random_ball(&mut rng, prec, -10.0, 10.0),
        );
        let (zr, zi) = (point(&mut rng, &z.re), point(&mut rng, &z.im));
        let (wr, wi) = (point(&mut rng, &w.re), point(&mut rng, &w.im));
        let pr = Float::with_val(HI, &zr * &wr) - Float::with_val(HI, &zi * &wi);
        let pi = Float::with_val(HI, &zr * &wi) + Float::with_val(HI, &zi * &wr);
        let p = z.mul(&w, prec);
        assert!(
            p.re.contains(&exact(pr)) && p.im.contains(&exact(pi)),
            "mul case {i}"
        );
        if let Ok(q) = z.div(&w, prec) {
            let d = Float::with_val(HI, &wr * &wr) + Float::with_val(HI, &wi * &wi);
            let qr = (Float::with_val(HI, &zr * &wr) + Float::with_val(HI, &zi * &wi)) / &d;
            let qi = (Float::with_val(HI, &zi * &wr) - Float::with_val(HI, &zr * &wi)) / &d;
            assert!(
                q.re.contains(&exact(qr)) && q.im.contains(&exact(qi)),
                "div case {i}"
            );
        }
        let m = Float::with_val(
            HI,
            (Float::with_val(HI, &zr * &zr) + Float::with_val(HI, &zi * &zi)).sqrt_ref(),
        );
        assert!(z.abs_upper().to_f64_up() >= m.to_f64());
        assert!(z.abs_lower().to_f64_down() <= m.to_f64());
    }
}

#[test]
fn f64_backend_contains() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..CASES {
        let a: f64 = rng.gen_range(-100.0..100.0);
        let b: f64 = rng.gen_range(-100.0..100.0);
        let ra: f64 = rng.gen_range(0.0..1e-3);
        let x = ball_core::BallF64::new(a, Mag::from_f64(ra));
        let y = ball_core::BallF64::from_f64(b, 53);
        let xa = Float::with_val(HI, a)
            + Float::with_val(HI, ra) * Float::with_val(HI, rng.gen_range(-1.0..=1.0f64));
        let yb = Float::with_val(HI, b);
        for (out, val) in [
            (x.add(&y, 53), Float::with_val(HI, &xa + &yb)),
            (x.mul(&y, 53), Float::with_val(HI, &xa * &yb)),
        ] {
            assert!(BallReal::from(&out).contains(&exact(val)), "f64 case {i}");
        }
        if let Ok(q) = x.div(&y, 53) {
            assert!(
                BallReal::from(&q).contains(&exact(Float::with_val(HI, &xa / &yb))),
                "f64 div {i}"
            );
        }
    }
}

#[test]
fn precision_monotone_radii() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let m: f64 = rng.gen_range(0.1..10.0);
        let n: f64 = rng.gen_range(0.1..10.0);
        let mut last = Mag::INF;
        for prec in [64, 128, 256, 512] {
            let a = BallReal::from_f64(m, prec);
            let b = BallReal::from_f64(n, prec);
            let r = a.div(&b, prec).unwrap().exp(prec).sqrt(prec).unwrap().rad();
            assert!(r <= last);
            last = r;
        }
    }
}

#[test]
fn pi_against_machin_series() {
    // π = 16 atan(1/5) − 4 atan(1/239), tail of each alternating series bounded by its next term
    use rug::{Integer, Rational};
    fn atan_inv(x: u32, terms: u32) -> Rational {
        let mut s = Rational::new();
        let x2 = Integer::from(x) * x;
        let mut pow = Integer::from(x);
        for k in 0..terms {
            let t = Rational::from((Integer::from(1), Integer::from(2 * k + 1) * &pow));
            if k % 2 == 0 {
                s += t;
            } else {
                s -= t;
            }
            pow *= &x2;
        }
        s
    }
    let terms = 120;
    let pi = (atan_inv(5, terms) * 16u32) - (atan_inv(239, terms) * 4u32);
    let approx = Float::with_val(1024, &pi);
    let ball = BallReal::pi(256);
    // series truncation error < 16/(241·5^241), far below 2^-256
    assert!(ball.contains(&BallReal::from_float(approx.clone())));
    let s = ball.to_string_digits(72);
    assert!(
        s.starts_with("[3.1415926535897932384626433832795028841971693993751058209749445923078164"),
        "{s}"
    );
}
