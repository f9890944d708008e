//! Ball-arithmetic checks of the branch geometry on `D_{3/2} = {|w−1| < 3/2}`:
//! each inverse branch `τ_n(w) = 1/(w+n)` maps it into the unit disc around 1,
//! and the weight satisfies `|(w+n)^{-2}| ≤ (n−½)^{-2}`.

use ball_core::{BallComplex, BallReal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GkwError;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeometryReport {
    /// Checks certified true.
    pub passed: u64,
    /// Checks the ball arithmetic could not decide.
    pub inconclusive: u64,
}

pub enum Verdict {
    True,
    Undecided,
}

/// Checks both inequalities at one point.
pub fn check_point(w: &BallComplex, n: u32, prec: u32) -> Result<(Verdict, Verdict), GkwError> {
    let one = BallComplex::one(prec);
    let shifted = w.add(&BallComplex::from_f64(n as f64, 0.0, prec), prec);
    let tau = shifted.inv(prec)?;
    let d = tau.sub(&one, prec);
    let contraction = if d.abs_upper().to_f64_up() < 1.0 {
        Verdict::True
    } else if d.abs_lower().to_f64_down() >= 1.0 {
        return Err(GkwError::GeometryViolation {
            w: format!("{w:?}"),
            n,
            what: "|τ_n(w) − 1| ≥ 1",
        });
    } else {
        Verdict::Undecided
    };
    // |(w+n)^{-2}| = |τ_n(w)|²
    let weight = tau.abs_sqr(prec);
    let bound = BallReal::from_f64(n as f64 - 0.5, prec)
        .sqr(prec)
        .inv(prec)?;
    let wv = if weight.upper_f64() <= bound.lower_f64() {
        Verdict::True
    } else if weight.lower_f64() > bound.upper_f64() {
        return Err(GkwError::GeometryViolation {
            w: format!("{w:?}"),
            n,
            what: "weight above (n−½)^{-2}",
        });
    } else {
        Verdict::Undecided
    };
    Ok((contraction, wv))
}

/// Random property harness over `|w−1| < 3/2`, `1 ≤ n ≤ 100`.
pub fn branch_geometry_check(samples: u64, seed: u64) -> Result<GeometryReport, GkwError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = GeometryReport::default();
    let prec = 128;
    for _ in 0..samples {
        let r = 1.5 * rng.gen::<f64>().sqrt();
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        let w = BallComplex::from_f64(1.0 + r * th.cos(), r * th.sin(), prec);
        if (w.re.mid_f64() - 1.0).hypot(w.im.mid_f64()) >= 1.5 {
            continue;
        }
        let n = rng.gen_range(1..=100u32);
        let (a, b) = check_point(&w, n, prec)?;
        for v in [a, b] {
            match v {
                Verdict::True => rep.passed += 1,
                Verdict::Undecided => rep.inconclusive += 1,
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_boundary_point() {
        let w = BallComplex::from_f64(-0.499, 0.0, 128);
        let (c, wv) = check_point(&w, 1, 128).unwrap();
        assert!(matches!(c, Verdict::True));
        assert!(matches!(wv, Verdict::True));
        let tau = w
            .add(&BallComplex::one(128), 128)
            .inv(128)
            .unwrap()
            .sub(&BallComplex::one(128), 128);
        assert!((tau.re.mid_f64() - (1.0 / 0.501 - 1.0)).abs() < 1e-15);
    }
}
