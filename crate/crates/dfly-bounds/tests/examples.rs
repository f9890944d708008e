mod common;

use ball_core::{BallComplex, BallReal};
use common::*;
use dfly_bounds::{
    default_family, dfly_convergence_suite, dfly_exclusion, dfly_iterate, growth_bound,
    rk_minus_r_bound, true_to_fine, weak_to_strong, CurveBound, DflyConstants, DflyError, PREC,
};
use nalgebra::Complex;

fn b(x: f64) -> BallReal {
    BallReal::from_f64(x, PREC)
}

fn consts(a: f64, bb: f64, m: f64, e_sw: f64, e_kws: f64, delta: f64, mu: f64) -> DflyConstants {
    DflyConstants {
        a: b(a),
        b: b(bb),
        m: b(m),
        e_sw: b(e_sw),
        e_kws: b(e_kws),
        delta_k: b(delta),
        mu: b(mu),
    }
}

fn close(x: &BallReal, y: f64) {
    assert!(
        (x.upper_f64() - y).abs() <= 1e-12 * y.abs().max(1.0),
        "{} vs {y}",
        x.upper_f64()
    );
}

#[test]
fn iterate_examples() {
    let c = consts(0.5, 1.0, 1.0, 1.0, 1.0, 0.0, 0.75);
    let (an, bn) = dfly_iterate(&c, 1).unwrap();
    close(&an, 0.5);
    close(&bn, 1.0);
    let (an, bn) = dfly_iterate(&c, 3).unwrap();
    close(&an, 0.125);
    assert!(bn.contains(&BallReal::from_ratio(7, 4, PREC).unwrap()));
    // a = M: b_n = n b a^{n-1}
    let c = consts(0.8, 0.3, 0.8, 1.0, 1.0, 0.0, 0.8);
    for n in 1..10u64 {
        let (_, bn) = dfly_iterate(&c, n).unwrap();
        close(&bn, n as f64 * 0.3 * 0.8f64.powi(n as i32 - 1));
    }
    assert!(matches!(dfly_iterate(&c, 0), Err(DflyError::Domain(_))));
}

#[test]
fn weak_to_strong_examples() {
    let z = BallComplex::from_f64(0.0, 2.0, PREC);
    // δ = 0
    let c = consts(0.5, 2.0, 1.0, 0.5, 4.0, 0.0, 0.75);
    close(
        &weak_to_strong(&z, &c, &b(3.0)).unwrap(),
        (2.0 * 3.0 * 0.5 + 1.0) / 1.5,
    );
    // b = 0
    let c = consts(0.5, 0.0, 1.0, 0.5, 4.0, 0.1, 0.75);
    close(&weak_to_strong(&z, &c, &b(3.0)).unwrap(), 1.0 / 1.5);
    // |z| below the threshold
    let c = consts(0.5, 2.0, 1.0, 0.5, 4.0, 1.0, 0.75);
    assert!(matches!(
        weak_to_strong(&z, &c, &b(3.0)),
        Err(DflyError::Condition { .. })
    ));
}

#[test]
fn rk_minus_r_examples() {
    assert!(rk_minus_r_bound(&b(5.0), &b(0.0), &b(7.0)).upper_f64() == 0.0);
    close(&rk_minus_r_bound(&b(1.0), &b(1.0), &b(1.0)), 1.0);
}

#[test]
fn true_to_fine_examples() {
    let z = BallComplex::from_f64(2.0, 0.0, PREC);
    // Δ = 0: S_N + |z|^{-N} E_sw K (a^N E + b_N)
    let c = consts(0.5, 1.0, 1.0, 0.5, 4.0, 0.0, 0.75);
    let (n, k) = (3u64, 2.0);
    let s_n = (1.0 + 0.5 + 0.25) / 2.0;
    let damp = 0.125 * 4.0 + 1.75;
    close(
        &true_to_fine(&z, n, &c, &b(k)).unwrap(),
        s_n + 0.125 * 0.5 * k * damp,
    );
    // N = 1, unit constants, |z| = 2: β̃ = 1 fails; with Δ = 1/2 the bound is 3
    let c = consts(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
    assert!(matches!(
        true_to_fine(&z, 1, &c, &b(1.0)),
        Err(DflyError::Condition { .. })
    ));
    let c = consts(1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 1.0);
    close(&true_to_fine(&z, 1, &c, &b(1.0)).unwrap(), 3.0);
    assert!(matches!(
        true_to_fine(&z, 0, &c, &b(1.0)),
        Err(DflyError::Domain(_))
    ));
}

#[test]
fn growth_examples() {
    // δ = 0 limit
    let (a, bb, m, e_sw, e, mu, k) = (0.25, 0.5, 1.0, 0.5, 16.0, 0.5, 3.0);
    let c = consts(a, bb, m, e_sw, e, 0.0, mu);
    let q = (mu / m).ln().abs() / (a / m).ln().abs();
    let cs = 1.0 + bb / (m - a);
    let expect = (m / mu) * e.powf(q) * (1.0 / (m - mu) + e_sw * k * cs);
    close(&growth_bound(&c, &b(k)).unwrap(), expect);
    assert_eq!(
        c.n_k().unwrap(),
        (e.ln() / (a / m).ln().abs()).ceil() as u64
    );
    // E_kws = 1 gives ⌈0⌉ = 0, floored to N = 1
    let c = consts(a, bb, m, e_sw, 1.0, 0.0, mu);
    assert_eq!(c.n_k().unwrap(), 1);
    // denominator failure
    let c = consts(a, bb, m, e_sw, e, 10.0, mu);
    assert!(matches!(
        growth_bound(&c, &b(k)),
        Err(DflyError::Condition { .. })
    ));
    // μ outside (a, M)
    let c = consts(a, bb, m, e_sw, e, 0.0, 0.2);
    assert!(c.q_bar().is_err());
}

#[test]
fn exclusion_examples() {
    // b = 0 contraction: any curve with inf |z| > a passes
    let c = consts(0.5, 0.0, 1.0, 1.0, 4.0, 0.3, 0.75);
    let curve = CurveBound {
        inf_abs_z: b(0.6),
        sup_weak_resolvent: b(1e6),
    };
    close(&dfly_exclusion(&curve, &c).unwrap(), 1.0 / 0.1);
    // δ large fails
    let c = consts(0.5, 1.0, 1.0, 1.0, 4.0, 10.0, 0.75);
    let curve = CurveBound {
        inf_abs_z: b(0.75),
        sup_weak_resolvent: b(5.0),
    };
    assert!(matches!(
        dfly_exclusion(&curve, &c),
        Err(DflyError::Condition { .. })
    ));
}

#[test]
fn synthetic_exclusion_confirmed_by_inversion() {
    let ex = default_family(8);
    let report = dfly_convergence_suite("default", 8, default_family);
    let row = report.rows.last().unwrap();
    let sup = row.sup_strong.expect("k = 8 passes");
    assert_eq!(row.multiplicity, Some(1));
    // the true L has an eigenvalue inside the circle and none on it
    let eig = eigenvalues(&ex.l);
    assert_eq!(
        eig.iter()
            .filter(|l| (*l - Complex::new(ex.center, 0.0)).norm() < ex.radius)
            .count(),
        1
    );
    for s in 0..128 {
        let t = std::f64::consts::TAU * s as f64 / 128.0;
        let z = Complex::new(ex.center + ex.radius * t.cos(), ex.radius * t.sin());
        let r = resolvent(&ex.l, z).expect("circle lies in the resolvent set");
        assert!(norm_ss(&r, &ex.weights) <= sup);
        let rk = resolvent(&ex.lk, z).unwrap();
        assert!(norm_ww(&rk) <= row.sup_weak.unwrap());
    }
}

#[test]
fn default_suite_converges() {
    let report = dfly_convergence_suite("default", 10, default_family);
    assert!(!report.rows[0].passed());
    assert!(report.rows[7].passed());
    let from = report.passing_from().unwrap();
    assert!(from <= 8, "{report}");
    assert!(report.multiplicity_stable());
    for w in report.rows.windows(2) {
        assert!(w[1].projector_diff < w[0].projector_diff, "{report}");
        assert!(w[1].delta_k < w[0].delta_k);
    }
    // the oracle eigendecomposition sees exactly one eigenvalue of L_k inside
    for k in from..=10 {
        let ex = default_family(k);
        let eig = eigenvalues(&ex.lk);
        let inside = eig
            .iter()
            .filter(|l| (*l - Complex::new(ex.center, 0.0)).norm() < ex.radius)
            .count();
        assert_eq!(Some(inside), report.rows[k as usize - 1].multiplicity);
    }
    let text = report.to_string();
    assert_eq!(text.lines().count(), 12);
}
