//! CSV and text tables; deterministic formatting, balls in text form.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::pipeline::PipelineSummary;

pub const EIGEN_HEADER: &str =
    "j,K,prec,m,multiplicity,lambda_re,lambda_im,radius,alpha,theta,M_inf";
pub const FINE_HEADER: &str = "j,K_fine,eps_fine,M_L,M_fine,alpha_fine,theta_fine";
pub const EXPANSION_HEADER: &str = "n,error_bound_j0_1,error_bound_j0_2";
pub const MODES_HEADER: &str = "j,lambda_re,lambda_im,coeff_re,coeff_im,error";

fn csv(s: &PipelineSummary) -> [(String, String); 4] {
    let mut eig = format!("{EIGEN_HEADER}\n");
    for w in &s.windows {
        let (re, im) = match &w.lambda {
            Some(l) => (l.re.to_string(), l.im.to_string()),
            None => ("none".into(), "none".into()),
        };
        let rad = w
            .radius()
            .map(|r| format!("{r:.3e}"))
            .unwrap_or_else(|| "none".into());
        let _ = writeln!(
            eig,
            "{},{},{},{},{},{re},{im},{rad},{:.6e},{:.6e},{:.6e}",
            w.target.label(),
            w.k,
            w.prec,
            w.m,
            w.multiplicity,
            w.alpha.upper_f64(),
            w.theta.upper_f64(),
            w.m_inf.upper_f64()
        );
    }
    let mut fine = format!("{FINE_HEADER}\n");
    for f in &s.fine {
        let _ = writeln!(
            fine,
            "{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}",
            f.target.label(),
            f.k_fine,
            f.eps_fine.upper_f64(),
            f.m_operator.upper_f64(),
            f.m_fine.upper_f64(),
            f.alpha_fine.upper_f64(),
            f.theta_fine.upper_f64()
        );
    }
    let mut exp = format!("{EXPANSION_HEADER}\n");
    let mut modes = format!("{MODES_HEADER}\n");
    if let Some(e) = &s.expansion {
        for (n, b1, b2) in &e.bounds {
            let _ = writeln!(exp, "{n},{:.6e},{:.6e}", b1.upper_f64(), b2.upper_f64());
        }
        for j in 0..e.n_modes {
            let _ = writeln!(
                modes,
                "{},{},{},{},{},{:.6e}",
                j + 1,
                e.lambdas[j].re,
                e.lambdas[j].im,
                e.coeffs[j].re,
                e.coeffs[j].im,
                e.errors[j].upper_f64()
            );
        }
    }
    [
        ("eigenvalues.csv".into(), eig),
        ("fine.csv".into(), fine),
        ("expansion.csv".into(), exp),
        ("modes.csv".into(), modes),
    ]
}

/// Human-readable report of the certified quantities.
pub fn text_report(s: &PipelineSummary) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "windows");
    for w in &s.windows {
        let lam = w
            .lambda
            .as_ref()
            .map(|l| l.re.to_string())
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            t,
            "  {:>5}  K={:<4} mult={}  lambda={lam}  alpha={:.3e}  theta={:.3e}  M_inf={:.3e}",
            w.target.label(),
            w.k,
            w.multiplicity,
            w.alpha.upper_f64(),
            w.theta.upper_f64(),
            w.m_inf.upper_f64()
        );
    }
    let _ = writeln!(t, "fine level");
    for f in &s.fine {
        let _ = writeln!(
            t,
            "  {:>5}  K'={:<4} eps={:.3e}  M_fine={:.3e}  alpha={:.3e}  theta={:.3e}",
            f.target.label(),
            f.k_fine,
            f.eps_fine.upper_f64(),
            f.m_fine.upper_f64(),
            f.alpha_fine.upper_f64(),
            f.theta_fine.upper_f64()
        );
    }
    if let Some(e) = &s.expansion {
        let _ = writeln!(
            t,
            "expansion  N={}  rho_sep={:.3e}  qnorm={:.3e}",
            e.n_modes,
            e.rho_sep.upper_f64(),
            e.qnorm.upper_f64()
        );
        for (n, b1, b2) in &e.bounds {
            let _ = writeln!(
                t,
                "  n={n:<3} error(j0=1)={:.3e}  error(j0=2)={:.3e}",
                b1.upper_f64(),
                b2.upper_f64()
            );
        }
    }
    for f in &s.failures {
        let _ = writeln!(t, "FAILED: {f}");
    }
    t
}

/// Write `eigenvalues.csv`, `fine.csv`, `expansion.csv`, `modes.csv` and
/// `report.txt` into `dir`. Missing stages give header-only files.
pub fn emit_tables(s: &PipelineSummary, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for (name, body) in csv(s) {
        let p = dir.join(name);
        fs::write(&p, body)?;
        out.push(p);
    }
    let p = dir.join("report.txt");
    fs::write(&p, text_report(s))?;
    out.push(p);
    Ok(out)
}
