//! Machine-readable reports.

use ball_core::BallComplex;
use serde_json::{json, Value};

use crate::pipeline::PipelineSummary;

fn cx(z: &Option<BallComplex>) -> Value {
    z.as_ref().map_or(
        Value::Null,
        |z| json!({ "re": z.re.to_string(), "im": z.im.to_string() }),
    )
}

pub fn summary_json(s: &PipelineSummary) -> Value {
    let attempts: Vec<Value> = s
        .attempts
        .iter()
        .map(|a| {
            json!({
                "stage": a.stage, "K": a.k, "prec": a.prec, "m": a.m, "cached": a.cached,
                "ok": a.outcome.is_ok(), "error": a.outcome.as_ref().err(),
            })
        })
        .collect();
    let windows: Vec<Value> = s
        .windows
        .iter()
        .map(|w| {
            json!({
                "target": w.target.label(), "K": w.k, "prec": w.prec, "m": w.m,
                "multiplicity": w.multiplicity, "lambda": cx(&w.lambda), "radius": w.radius(),
                "alpha": w.alpha.upper_f64(), "theta": w.theta.upper_f64(), "M_inf": w.m_inf.upper_f64(),
            })
        })
        .collect();
    let fine: Vec<Value> = s
        .fine
        .iter()
        .map(|f| {
            json!({
                "target": f.target.label(), "K_fine": f.k_fine, "eps_fine": f.eps_fine.upper_f64(),
                "M_fine": f.m_fine.upper_f64(), "alpha_fine": f.alpha_fine.upper_f64(),
                "theta_fine": f.theta_fine.upper_f64(),
            })
        })
        .collect();
    let expansion = s.expansion.as_ref().map_or(Value::Null, |e| {
        json!({
            "modes": e.n_modes,
            "lambda": e.lambdas.iter().map(|l| cx(&Some(l.clone()))).collect::<Vec<_>>(),
            "coeff": e.coeffs.iter().map(|l| cx(&Some(l.clone()))).collect::<Vec<_>>(),
            "rho_sep": e.rho_sep.upper_f64(), "qnorm": e.qnorm.upper_f64(),
            "error_bound": e.bounds.iter().map(|(n, a, b)| json!({"n": n, "j0_1": a.upper_f64(), "j0_2": b.upper_f64()})).collect::<Vec<_>>(),
        })
    });
    json!({
        "ok": s.ok(), "failures": s.failures, "store_hits": s.hits, "store_misses": s.misses,
        "attempts": attempts, "windows": windows, "fine": fine, "expansion": expansion,
        "files": s.files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    })
}
