//! Convergence report over a family `k ↦ (L, L_k)`.

use std::fmt;

use ball_core::{BallReal, Cplx};
use certify_engine::{certify_window, OperatorContext, Policy};
use rayon::prelude::*;

use crate::bounds::{dfly_exclusion, CurveBound};
use crate::synthetic::TwoNormExample;
use crate::{upper_ball, DflyError, PREC};

/// One line of the report.
#[derive(Clone, Debug)]
pub struct SuiteRow {
    pub k: u32,
    pub delta_k: f64,
    /// Multiplicity of `L_k` inside the circle, when certified.
    pub multiplicity: Option<usize>,
    /// `sup_Γ R_w(z, L_k)`.
    pub sup_weak: Option<f64>,
    /// `sup_Γ R_s(z, L)` when the exclusion passes.
    pub sup_strong: Option<f64>,
    /// `‖P_k − P‖_{s→w}` from trapezoidal contour projectors (unvalidated).
    pub projector_diff: f64,
    pub failure: Option<String>,
}

impl SuiteRow {
    pub fn passed(&self) -> bool {
        self.sup_strong.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub family: String,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    /// First `k` from which every later row passes.
    pub fn passing_from(&self) -> Option<u32> {
        let last_fail = self.rows.iter().rposition(|r| !r.passed());
        match last_fail {
            None => self.rows.first().map(|r| r.k),
            Some(i) => self.rows.get(i + 1).map(|r| r.k),
        }
    }

    /// Multiplicity is the same on every passing row.
    pub fn multiplicity_stable(&self) -> bool {
        let mut it = self
            .rows
            .iter()
            .filter(|r| r.passed())
            .map(|r| r.multiplicity);
        match it.next() {
            None => true,
            Some(m0) => it.all(|m| m == m0),
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family {}", self.family)?;
        writeln!(
            f,
            "{:>3}  {:>10}  {:>4}  {:>10}  {:>10}  {:>10}  status",
            "k", "delta_k", "mult", "sup R_w", "sup R_s", "|Pk-P|"
        )?;
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
        for r in &self.rows {
            let status = match &r.failure {
                None => "PASS".to_string(),
                Some(e) => format!("FAIL ({e})"),
            };
            writeln!(
                f,
                "{:>3}  {:>10.3e}  {:>4}  {:>10}  {:>10}  {:>10.3e}  {}",
                r.k,
                r.delta_k,
                r.multiplicity
                    .map(|m| m.to_string())
                    .unwrap_or_else(|| "-".into()),
                opt(r.sup_weak),
                opt(r.sup_strong),
                r.projector_diff,
                status
            )?;
        }
        Ok(())
    }
}

/// Weak resolvent supremum of `L_k` on the circle and its multiplicity.
/// `‖·‖_∞ ≤ ‖·‖_2 ≤ √d ‖·‖_∞` turns the spectral-norm bound into a
/// max-norm bound.
fn weak_resolvent_sup(ex: &TwoNormExample) -> Result<(usize, BallReal), DflyError> {
    let a = ex.lk_ball(PREC);
    let c = BallReal::from_f64(a.frobenius_upper().to_f64_up(), PREC);
    let ctx = OperatorContext::new(0, a, BallReal::zero(PREC), c, None)?;
    let policy = Policy::default();
    let spec = ctx.window((ex.center, 0.0), ex.radius, &policy);
    let enc = certify_window(&ctx, &spec)?;
    let d = BallReal::from_f64(ex.dim() as f64, PREC).sqrt(PREC)?;
    Ok((enc.multiplicity, upper_ball(&enc.m_a.mul(&d, PREC))))
}

fn solve(mut a: Vec<Vec<Cplx<f64>>>, mut b: Vec<Vec<Cplx<f64>>>) -> Vec<Vec<Cplx<f64>>> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm()))
            .unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
            for k in 0..b[r].len() {
                let v = b[c][k];
                b[r][k] -= f * v;
            }
        }
    }
    for c in (0..n).rev() {
        for k in 0..b[c].len() {
            let mut s = b[c][k];
            for j in c + 1..n {
                s -= a[c][j] * b[j][k];
            }
            b[c][k] = s / a[c][c];
        }
    }
    b
}

/// Riesz projector of `x` for the circle, trapezoidal rule with `m` nodes.
pub fn contour_projector(
    x: &ball_core::FloatMatrixF64,
    center: f64,
    radius: f64,
    m: usize,
) -> Vec<Vec<Cplx<f64>>> {
    let n = x.rows();
    let eye: Vec<Vec<Cplx<f64>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Cplx::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    let mut p = vec![vec![Cplx::new(0.0, 0.0); n]; n];
    for s in 0..m {
        let t = 2.0 * std::f64::consts::PI * s as f64 / m as f64;
        let dz = Cplx::new(radius * t.cos(), radius * t.sin());
        let z = Cplx::new(center, 0.0) + dz;
        let a = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { z - x[(i, j)] } else { -x[(i, j)] })
                    .collect()
            })
            .collect();
        let r = solve(a, eye.clone());
        for i in 0..n {
            for j in 0..n {
                p[i][j] += r[i][j] * dz / m as f64;
            }
        }
    }
    p
}

/// `max_i Σ_j |x_ij| / w_j`.
fn norm_sw_complex(x: &[Vec<Cplx<f64>>], weights: &[f64]) -> f64 {
    x.iter()
        .map(|row| {
            row.iter()
                .zip(weights)
                .map(|(v, w)| v.norm() / w)
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

fn row(k: u32, ex: &TwoNormExample) -> SuiteRow {
    let p = contour_projector(&ex.l, ex.center, ex.radius, 256);
    let pk = contour_projector(&ex.lk, ex.center, ex.radius, 256);
    let diff: Vec<Vec<Cplx<f64>>> = p
        .iter()
        .zip(&pk)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
        .collect();
    let projector_diff = norm_sw_complex(&diff, &ex.weights);
    let mut out = SuiteRow {
        k,
        delta_k: f64::NAN,
        multiplicity: None,
        sup_weak: None,
        sup_strong: None,
        projector_diff,
        failure: None,
    };
    let res = (|| -> Result<(), DflyError> {
        let c = ex.constants()?;
        out.delta_k = c.delta_k.upper_f64();
        let (mult, mk) = weak_resolvent_sup(ex)?;
        out.multiplicity = Some(mult);
        out.sup_weak = Some(mk.upper_f64());
        let curve = CurveBound {
            inf_abs_z: ex.inf_abs_z(),
            sup_weak_resolvent: mk,
        };
        out.sup_strong = Some(dfly_exclusion(&curve, &c)?.upper_f64());
        Ok(())
    })();
    if let Err(e) = res {
        out.failure = Some(e.to_string());
    }
    out
}

/// Run the exclusion and projector comparison for `k = 1..=kmax`.
pub fn dfly_convergence_suite(
    family: &str,
    kmax: u32,
    make: impl Fn(u32) -> TwoNormExample + Sync,
) -> SuiteReport {
    let rows = (1..=kmax)
        .into_par_iter()
        .map(|k| row(k, &make(k)))
        .collect();
    SuiteReport {
        family: family.to_string(),
        rows,
    }
}
