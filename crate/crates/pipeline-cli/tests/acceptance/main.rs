//! End-to-end acceptance: one PASS/FAIL line per criterion.

mod oracle_dfly;
mod oracle_gkw;
mod oracle_linalg;

use std::io::Write;
use std::time::{Duration, Instant};

use ball_core::rug::{Float, Rational};
use ball_core::scalar::float_of_mag;
use ball_core::{BallComplex, BallReal, ComplexBall, MpFloat};
use certify_engine::{
    certify_window, certify_windows, propagate_to_fine, EigenEnclosure, OperatorContext, Policy,
};
use gkw_model::{assemble_matrix, c2_bound, c2_default, truncation_budget, two_thirds_pow};
use spectral_expansion::{gauss_kuzmin_error, tail_bound_from, ExpansionCertificate};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(limit: Duration, t: Instant, r: Outcome) -> Outcome {
    let e = t.elapsed();
    match r {
        Ok(m) if e <= limit => Ok(m),
        Ok(m) => Err(format!("{m}; {e:.2?} exceeds {limit:?}")),
        Err(m) => Err(m),
    }
}

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Enclosures certified along the way, for the decay check.
#[derive(Default)]
struct Shared {
    ctx48: Option<OperatorContext>,
    enclosures: Vec<(usize, BallComplex)>,
}

impl Shared {
    fn ctx48(&mut self) -> Result<&OperatorContext, String> {
        if self.ctx48.is_none() {
            self.ctx48 = Some(OperatorContext::gkw(48, 192).map_err(fail)?);
        }
        Ok(self.ctx48.as_ref().unwrap())
    }

    fn keep(&mut self, e: &EigenEnclosure) {
        if let (Some(j), Some(l)) = (e.index, &e.lambda) {
            self.enclosures.push((j, l.clone()));
        }
    }
}

fn c2_table() -> Outcome {
    const TABLE: [(u64, &str); 7] = [
        (1, "11.7000807086"),
        (2, "10.4849507042"),
        (3, "10.2709840576"),
        (4, "10.1907129342"),
        (5, "10.1506945125"),
        (10, "10.0893118365"),
        (100, "10.0590444185"),
    ];
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for (n, printed) in TABLE {
        let c = c2_bound(n, 128).map_err(fail)?;
        let rad = c.rad().to_f64_up();
        worst = worst.max(rad);
        let got = format!("{:.10}", c.mid_f64());
        if got != printed || rad > 1e-11 {
            bad.push(format!("; N={n}: {got} (radius {rad:.1e}) vs {printed}"));
        }
    }
    let r = check(
        bad.is_empty(),
        format!(
            "7 values match to 10 decimals, max radius {worst:.1e}{}",
            bad.join("; ")
        ),
    );
    within(Duration::from_secs(1), t, r)
}

fn budgets() -> Outcome {
    let t = Instant::now();
    let c2 = c2_default(128).map_err(fail)?;
    let e48 = truncation_budget(48, &c2).eps_k;
    let e256 = truncation_budget(256, &c2).eps_k;
    let ok = e48.lower_f64() >= 2.3e-8
        && e48.upper_f64() <= 2.4e-8
        && e256.lower_f64() >= 5.5e-45
        && e256.upper_f64() <= 5.7e-45;
    let r = check(
        ok,
        format!(
            "eps_48 = {:.4e}, eps_256 = {:.4e}",
            e48.mid_f64(),
            e256.mid_f64()
        ),
    );
    within(Duration::from_secs(1), t, r)
}

fn float_to_rational(f: &Float) -> Rational {
    f.to_rational().expect("finite")
}

fn assembly_oracle() -> Outcome {
    let t = Instant::now();
    let k = 16u32;
    let m = assemble_matrix(k as usize, 256).map_err(fail)?;
    let oracle = oracle_gkw::ZetaOracle::new(2 * k + 2);
    let bound = Rational::from_f64(1e-40).unwrap();
    let (mut outside, mut loose) = (0, 0);
    let mut worst_err = Rational::new();
    for l in 0..=k {
        for c in 0..=k {
            let (v, err) = oracle.entry(l, c);
            if err > bound {
                loose += 1;
            }
            let e = m.a.get(l as usize, c as usize);
            let mid = float_to_rational(&e.re.mid().0);
            let rad = float_to_rational(&float_of_mag(&e.re.rad()));
            let gap = Rational::from((mid - &v).abs_ref());
            if gap > rad + &err || !e.im.contains_zero() {
                outside += 1;
            }
            if err > worst_err {
                worst_err = err;
            }
        }
    }
    let n = (k + 1) * (k + 1);
    let r = check(
        outside == 0 && loose == 0,
        format!(
            "{n} entries vs exact branch sums over n <= {} plus rational tail: {outside} outside, max oracle radius {:.1e}",
            oracle_gkw::BRANCHES,
            worst_err.to_f64()
        ),
    );
    within(Duration::from_secs(60), t, r)
}

fn lambda1(shared: &mut Shared) -> Outcome {
    let t = Instant::now();
    let ctx = OperatorContext::gkw(32, 256).map_err(fail)?;
    let e = certify_window(
        &ctx,
        &ctx.default_window(1, &Policy::default()).map_err(fail)?,
    )
    .map_err(fail)?;
    shared.keep(&e);
    let lam = e.lambda.clone().ok_or("no eigenvalue enclosure")?;
    let one = ComplexBall::from_f64(1.0, 0.0, 256);
    let r = check(
        e.simple && lam.contains(&one),
        format!(
            "K=32: simple {}, radius {:.1e}, contains 1: {}",
            e.simple,
            lam.rad().to_f64_up(),
            lam.contains(&one)
        ),
    );
    within(Duration::from_secs(300), t, r)
}

fn wirsing(shared: &mut Shared) -> Outcome {
    const LAMBDA2: &str = "-0.3036630028987326585";
    let t = Instant::now();
    let ctx = OperatorContext::gkw(128, 512).map_err(fail)?;
    let e = certify_window(
        &ctx,
        &ctx.default_window(2, &Policy::default()).map_err(fail)?,
    )
    .map_err(fail)?;
    shared.keep(&e);
    let lam = e.lambda.clone().ok_or("no eigenvalue enclosure")?;
    let rad = lam.rad().to_f64_up();
    let reference = MpFloat::parse_prec(LAMBDA2, 512).unwrap();
    let diff = Float::with_val(512, &lam.re.mid().0 - &reference.0)
        .abs()
        .to_f64();
    let dec = mid_decimal(&lam.re);
    let agree = lam.re.mid().0.is_sign_negative() && dec[..12] == LAMBDA2[1..13] && diff < 1e-10;
    let r = check(
        rad <= 1e-10 && agree,
        format!("K=128: midpoint -{dec}, radius {rad:.1e}, |mid - reference| = {diff:.1e}"),
    );
    within(Duration::from_secs(1800), t, r)
}

/// `|mid|` truncated to 20 decimals.
fn mid_decimal(b: &BallReal) -> String {
    let q = float_to_rational(&b.mid().0);
    let scale = ball_core::rug::Integer::from(ball_core::rug::Integer::u_pow_u(10, 20));
    let n = (q * Rational::from(scale)).trunc();
    let s = n.numer().clone().abs().to_string();
    format!("0.{s:0>20}")
}

fn windows_and_gap(shared: &mut Shared) -> Outcome {
    let pol = Policy::default();
    let ctx = shared.ctx48()?;
    let specs = (1..=5)
        .map(|j| ctx.default_window(j, &pol))
        .collect::<Result<Vec<_>, _>>()
        .map_err(fail)?;
    let results = certify_windows(ctx, &specs);
    let gap = certify_window(ctx, &ctx.gap_window(2, &pol).map_err(fail)?);
    let mut parts = Vec::new();
    let mut ok = true;
    let mut keep = Vec::new();
    for (j, r) in (1..=5).zip(results) {
        match r {
            Ok(e) => {
                let a = e.alpha.upper_f64();
                ok &= e.multiplicity == 1 && a < 1.0;
                parts.push(format!("j={j} mult {} alpha {a:.2e}", e.multiplicity));
                keep.push(e);
            }
            Err(err) => {
                ok = false;
                parts.push(format!("j={j} failed: {err}"));
            }
        }
    }
    for e in &keep {
        shared.keep(e);
    }
    match gap {
        Ok(g) => {
            ok &= g.multiplicity == 0;
            parts.push(format!("gap(2,3) mult {}", g.multiplicity));
        }
        Err(err) => {
            ok = false;
            parts.push(format!("gap failed: {err}"));
        }
    }
    check(ok, format!("K=48: {}", parts.join(", ")))
}

fn decay(shared: &Shared) -> Outcome {
    let c2 = c2_default(128).map_err(fail)?;
    let mut bad = Vec::new();
    for (j, lam) in &shared.enclosures {
        let bound = c2.mul(&two_thirds_pow(*j as u64 - 1, 128), 128);
        if lam.abs_upper() > bound.mag_lower() {
            bad.push(format!("j={j}"));
        }
    }
    check(
        bad.is_empty() && !shared.enclosures.is_empty(),
        format!(
            "{} certified enclosures checked, violations: [{}]",
            shared.enclosures.len(),
            bad.join(" ")
        ),
    )
}

fn coarse_fine(shared: &mut Shared) -> Outcome {
    let pol = Policy::default();
    let ctx = shared.ctx48()?;
    let spec = ctx.default_window(2, &pol).map_err(fail)?;
    let coarse = certify_window(ctx, &spec).map_err(fail)?;
    let fine_ctx = OperatorContext::gkw(96, 384).map_err(fail)?;
    let fine = propagate_to_fine(&coarse, 96, &fine_ctx.eps_k).map_err(fail)?;
    let direct = certify_window(&fine_ctx, &spec).map_err(fail)?;
    shared.keep(&direct);
    let (prop, dir) = (fine.m_fine.upper_f64(), direct.m_lk.upper_f64());
    let ratio = fine.theta_fine.upper_f64() / coarse.theta.upper_f64();
    let scale = two_thirds_pow(48, 64).upper_f64();
    check(
        dir <= prop && (0.1 * scale..=10.0 * scale).contains(&ratio),
        format!(
            "propagated M {prop:.4e} >= direct {dir:.4e}; theta ratio {ratio:.3e} = {:.3} x (2/3)^48",
            ratio / scale
        ),
    )
}

fn gauss_kuzmin(shared: &mut Shared) -> Outcome {
    let ctx = shared.ctx48()?;
    let cert = ExpansionCertificate::certify(ctx, 5, &Policy::default()).map_err(fail)?;
    let grid: Vec<BallReal> = (0..=20)
        .map(|i| BallReal::from_ratio(i, 20, cert.prec).unwrap())
        .collect();
    let sup = |n: u64| {
        grid.iter()
            .map(|x| gauss_kuzmin_error(&cert, n, x).upper_f64())
            .fold(0.0, f64::max)
    };
    let sups: Vec<f64> = (2..=8).map(sup).collect();
    let ratios: Vec<f64> = sups.windows(2).map(|w| w[1] / w[0]).collect();
    let signs: Vec<Option<i8>> = cert.modes.iter().take(4).map(|m| m.sign()).collect();
    let want = [Some(1), Some(1), Some(-1), Some(1)];
    let fmt: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    let sgn: String = signs
        .iter()
        .map(|s| match s {
            Some(1) => '+',
            Some(-1) => '-',
            _ => '?',
        })
        .collect();
    check(
        ratios.iter().all(|r| (0.25..=0.37).contains(r)) && signs == want,
        format!("N=5: ratios n=2..8 [{}], signs {sgn}", fmt.join(", ")),
    )
}

fn tail_formula() -> Outcome {
    let t = Instant::now();
    let b = |x: f64| BallReal::from_f64(x, 128);
    let v = tail_bound_from(&b(1.014e-21), &b(6.062e41), &b(6.138e-21), 1).upper_f64();
    let r = check(v < 1e-20, format!("bound at n=1: {v:.3e}"));
    within(Duration::from_secs(1), t, r)
}

#[test]
fn acceptance_criteria() {
    let mut shared = Shared::default();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut timed = |id: u32, name: &'static str, f: &mut dyn FnMut(&mut Shared) -> Outcome| {
        let t = Instant::now();
        let r = f(&mut shared);
        let line = match &r {
            Ok(m) => format!("criterion {id:>2}: PASS {name}: {m}"),
            Err(m) => format!("criterion {id:>2}: FAIL {name}: {m}"),
        };
        // straight to the handle, so the line shows without --nocapture
        let _ = writeln!(std::io::stderr(), "{line} ({:.1?})", t.elapsed());
        results.push((id, name, r));
    };
    timed(1, "C2 table", &mut |_| c2_table());
    timed(2, "truncation budgets", &mut |_| budgets());
    timed(3, "assembly oracle", &mut |_| assembly_oracle());
    timed(4, "lambda_1 = 1", &mut lambda1);
    timed(5, "Wirsing constant", &mut wirsing);
    timed(6, "simplicity and gap", &mut windows_and_gap);
    timed(7, "eigenvalue decay", &mut |s| decay(s));
    timed(8, "validated-linalg soundness", &mut |_| {
        let t = Instant::now();
        within(
            Duration::from_secs(600),
            t,
            oracle_linalg::soundness_suite(),
        )
    });
    timed(9, "coarse-fine soundness", &mut coarse_fine);
    timed(10, "Gauss-Kuzmin convergence", &mut gauss_kuzmin);
    timed(11, "tail formula", &mut |_| tail_formula());
    timed(12, "DFLY property suite", &mut |_| {
        let t = Instant::now();
        within(Duration::from_secs(300), t, oracle_dfly::property_suite())
    });
    let failed: Vec<u32> = results
        .iter()
        .filter(|r| r.2.is_err())
        .map(|r| r.0)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
