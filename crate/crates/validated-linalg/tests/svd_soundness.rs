mod common;

use ball_core::{Ball, BallMatrix, ComplexBall, Cplx, FloatMatrix, Mag};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use validated_linalg::{jacobi_svd_f64, svd_enclosure};

#[test]
fn oracle_agrees_with_diagonal() {
    let d = FloatMatrix::from_fn(3, 3, |i, j| {
        if i == j {
            Cplx::new([3.0, -1.0, 0.5][i], 0.0)
        } else {
            Cplx::new(0.0, 0.0)
        }
    });
    let s = oracle_singular_values(&d);
    assert!((s[0] - 3.0).abs() < 1e-15 && (s[1] - 1.0).abs() < 1e-15 && (s[2] - 0.5).abs() < 1e-15);
}

#[test]
fn enclosure_contains_oracle_singular_values_200_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut violations = 0;
    for case in 0..200 {
        let n = rng.gen_range(1..=8);
        let mid = random_matrix(&mut rng, n, 2.0);
        // ball matrix with random radii; the oracle point lies inside
        let rad = if case % 2 == 0 { 0.0 } else { 1e-9 };
        let a = BallMatrix::from_fn(n, n, |i, j| {
            ComplexBall::new(
                Ball::new(mid[(i, j)].re, Mag::from_f64(rad)),
                Ball::new(mid[(i, j)].im, Mag::from_f64(rad)),
            )
        });
        let point = FloatMatrix::from_fn(n, n, |i, j| {
            let dr = if rad > 0.0 {
                rng.gen_range(-rad..rad)
            } else {
                0.0
            };
            let di = if rad > 0.0 {
                rng.gen_range(-rad..rad)
            } else {
                0.0
            };
            Cplx::new(mid[(i, j)].re + dr, mid[(i, j)].im + di)
        });
        let cand = jacobi_svd_f64(&mid, None);
        let enc = svd_enclosure(&a, &cand.u, &cand.v).unwrap();
        let sig = oracle_singular_values(&point);
        // sorted matching realizes some permutation; every oracle value must
        // lie in its matched interval
        let mut iv: Vec<(f64, f64)> = enc
            .intervals
            .iter()
            .map(|i| (i.lo.to_f64_down(), i.hi.to_f64_up()))
            .collect();
        iv.sort_by(|a, b| (b.0 + b.1).partial_cmp(&(a.0 + a.1)).unwrap());
        for (s, (lo, hi)) in sig.iter().zip(&iv) {
            if !(*lo <= *s && *s <= *hi) {
                violations += 1;
            }
        }
        assert!(enc.sigma_min_lower().to_f64_up() <= *sig.last().unwrap());
    }
    assert_eq!(violations, 0);
}

#[test]
fn identity_and_diagonal_examples() {
    let i3 = FloatMatrix::<f64>::identity(3, 53);
    let enc = svd_enclosure(&BallMatrix::from_float(&i3), &i3, &i3).unwrap();
    // the double-precision product carries an a priori rounding term
    for iv in &enc.intervals {
        assert!(iv.lo.to_f64_up() <= 1.0 && iv.lo.to_f64_up() > 1.0 - 1e-13);
        assert!(iv.hi.to_f64_up() >= 1.0 && iv.hi.to_f64_up() < 1.0 + 1e-13);
    }
    let d = FloatMatrix::from_fn(2, 2, |i, j| {
        if i == j {
            Cplx::new([3.0, 1.0][i], 0.0)
        } else {
            Cplx::new(0.0, 0.0)
        }
    });
    let i2 = FloatMatrix::<f64>::identity(2, 53);
    let enc = svd_enclosure(&BallMatrix::from_float(&d), &i2, &i2).unwrap();
    assert!(enc.norm_e.to_f64_up() < 1e-13);
    assert!((enc.intervals[0].lo.to_f64_up() - 3.0).abs() < 1e-13);
    assert!((enc.intervals[1].hi.to_f64_up() - 1.0).abs() < 1e-13);
}

#[test]
fn non_unitary_candidates_are_rejected() {
    let a = BallMatrix::from_float(&FloatMatrix::<f64>::identity(2, 53));
    let bad = FloatMatrix::from_fn(2, 2, |_, _| Cplx::new(1.0, 0.0));
    assert!(svd_enclosure(&a, &bad, &FloatMatrix::identity(2, 53)).is_err());
}
