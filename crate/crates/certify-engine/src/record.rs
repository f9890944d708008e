//! Key-value text records and summary rows for certified windows.

use std::fmt::Write;

use ball_core::BallReal;

use crate::window::EigenEnclosure;

fn opt(b: &Option<BallReal>) -> String {
    b.as_ref().map_or_else(|| "none".into(), |x| x.to_string())
}

impl EigenEnclosure {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "format = eigen-enclosure-v1");
        let _ = writeln!(s, "K = {}", self.k);
        let _ = writeln!(
            s,
            "index = {}",
            self.index.map_or_else(|| "none".into(), |j| j.to_string())
        );
        let _ = writeln!(s, "center = {}", self.center());
        let _ = writeln!(s, "rho = {}", self.rho());
        let _ = writeln!(s, "m = {}", self.contour.m);
        let _ = writeln!(s, "multiplicity = {}", self.multiplicity);
        let _ = writeln!(s, "simple = {}", self.simple);
        let _ = writeln!(
            s,
            "lambda = {}",
            self.lambda
                .as_ref()
                .map_or_else(|| "none".into(), |z| z.to_string())
        );
        let _ = writeln!(
            s,
            "lambda_K = {}",
            self.lambda_k
                .as_ref()
                .map_or_else(|| "none".into(), |z| z.to_string())
        );
        let _ = writeln!(s, "eps_K = {}", self.eps_k);
        let _ = writeln!(s, "s_star = {}", self.contour.s_star);
        let _ = writeln!(s, "M_T = {}", self.contour.m_t);
        let _ = writeln!(s, "beta = {}", self.beta);
        let _ = writeln!(s, "M_A = {}", self.m_a);
        let _ = writeln!(s, "M_LK = {}", self.m_lk);
        let _ = writeln!(s, "alpha = {}", self.alpha);
        let _ = writeln!(s, "M_inf = {}", self.m_inf);
        let _ = writeln!(s, "theta = {}", self.theta);
        let _ = writeln!(s, "evec_err = {}", opt(&self.evec_err));
        let _ = writeln!(s, "p_fin = {}", opt(&self.p_fin));
        s
    }

    /// One line: index, midpoint digits, radius, α, ϑ.
    pub fn summary_row(&self) -> String {
        let idx = self.index.map_or_else(|| "-".into(), |j| j.to_string());
        let (mid, rad) = match &self.lambda {
            Some(l) => (
                l.re.to_string_digits(l.re.auto_digits().min(40)),
                format!("{:.2e}", l.re.rad().max(l.im.rad()).to_f64_up()),
            ),
            None => ("-".into(), "-".into()),
        };
        format!(
            "{idx:>4}  mult={}  lambda={mid}  rad={rad}  alpha={:.3e}  theta={:.3e}",
            self.multiplicity,
            self.alpha.upper_f64(),
            self.theta.upper_f64()
        )
    }
}
