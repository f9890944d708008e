//! The certified expansion `L^n 1 = Σ_{j ≤ N} λ_j^n P_j 1 + L^n Q_N 1`.

use ball_core::{
    cabs, BallComplex, BallMatrix, BallMatrixMp, BallReal, ComplexBall, Mag, RealScalar,
};
use certify_engine::{
    certify_separating_circle, certify_windows, EigenEnclosure, OperatorContext, Policy,
    SeparatingCircle,
};

use crate::mode::{spectral_coefficient, Mode};
use crate::{upper, ExpansionError};

#[derive(Clone, Debug)]
pub struct ExpansionCertificate {
    pub n_modes: usize,
    pub modes: Vec<Mode>,
    pub lambdas: Vec<BallComplex>,
    pub coeffs: Vec<BallComplex>,
    /// Column `j` holds the eigenvector of mode `j + 1`.
    pub evec_columns: BallMatrixMp,
    /// `|λ_{N+1}| < ρ < |λ_N|`.
    pub rho_sep: BallReal,
    pub m_inf_sep: BallReal,
    /// `≥ ‖Q_N 1‖`.
    pub qnorm: BallReal,
    pub prec: u32,
}

/// One evaluated grid point.
#[derive(Clone, Debug)]
pub struct ExpansionPoint {
    pub x: f64,
    pub value: BallComplex,
    /// Bound on the distance from `value` to the exact `F_n^{(j0)}(x)`.
    pub error: BallReal,
}

impl ExpansionPoint {
    pub fn value_mid(&self) -> f64 {
        self.value.re.mid_f64()
    }
    /// `≥ |value − value_mid|` over the whole ball.
    pub fn value_rad(&self) -> f64 {
        let p = self.value.prec().max(64);
        let m = BallComplex::from_f64(self.value_mid(), 0.0, p);
        self.value.sub(&m, p).abs_upper().to_f64_up()
    }
}

/// `√π ≥ ‖f ↦ ∫₀ˣ f‖` on `H²(D₁)` for `x ∈ [0, 1]`.
fn sqrt_pi() -> Mag {
    BallReal::pi(64).mag_upper().sqrt_up()
}

/// `ρ^{n+1} M q`, outward rounded.
pub fn tail_bound_from(rho: &BallReal, m: &BallReal, q: &BallReal, n: u64) -> BallReal {
    let (r, m, q) = (rho.mag_upper(), m.mag_upper(), q.mag_upper());
    let mut p = r;
    for _ in 0..n {
        p = p.mul_up(&r);
    }
    upper(p.mul_up(&m).mul_up(&q))
}

pub fn tail_bound(cert: &ExpansionCertificate, n: u64) -> BallReal {
    tail_bound_from(&cert.rho_sep, &cert.m_inf_sep, &cert.qnorm, n)
}

/// `‖(I − Σ P_j) 1‖ ≤ ‖e₀ − Σ ℓ_j v_j‖ + Σ err_j`.
pub fn qnorm_bound(modes: &[Mode], dim: usize, prec: u32) -> BallReal {
    let mut r: Vec<BallComplex> = (0..dim)
        .map(|k| BallComplex::from_f64(if k == 0 { 1.0 } else { 0.0 }, 0.0, prec))
        .collect();
    let mut err = Mag::ZERO;
    for m in modes {
        for (rk, vk) in r.iter_mut().zip(&m.vector) {
            *rk = rk.sub(&m.coeff.mul(vk, prec), prec);
        }
        err = err.add_up(&m.error.mag_upper());
    }
    let sq = r.iter().fold(Mag::ZERO, |s, z| {
        let a = z.abs_upper();
        s.add_up(&a.mul_up(&a))
    });
    upper(sq.sqrt_up().add_up(&err))
}

impl ExpansionCertificate {
    /// Assemble from certified simple windows `1..=N` and a separating circle.
    pub fn from_parts(
        windows: &[EigenEnclosure],
        sep: &SeparatingCircle,
        dim: usize,
    ) -> Result<Self, ExpansionError> {
        let n_modes = windows.len();
        if sep.outside != n_modes {
            return Err(ExpansionError::Separation(format!(
                "{} eigenvalues outside the separating circle, {} windows",
                sep.outside, n_modes
            )));
        }
        let p = 128;
        for (i, a) in windows.iter().enumerate() {
            // each window lies outside the separating circle
            let gap = a.center().abs_ball(p).sub(a.rho(), p).sub(&sep.rho, p);
            if !gap.is_positive() {
                return Err(ExpansionError::Separation(format!(
                    "window {} meets the separating circle",
                    i + 1
                )));
            }
            for b in &windows[..i] {
                let d = a
                    .center()
                    .sub(b.center(), p)
                    .abs_ball(p)
                    .sub(&a.rho().add(b.rho(), p), p);
                if !d.is_positive() {
                    return Err(ExpansionError::Separation("overlapping windows".into()));
                }
            }
        }
        let modes = windows
            .iter()
            .map(spectral_coefficient)
            .collect::<Result<Vec<_>, _>>()?;
        let prec = modes.first().map(|m| m.coeff.prec()).unwrap_or(128).max(64);
        let qnorm = qnorm_bound(&modes, dim, prec);
        let evec_columns = BallMatrix::from_fn(dim, n_modes, |k, j| modes[j].vector[k].clone());
        Ok(ExpansionCertificate {
            n_modes,
            lambdas: modes.iter().map(|m| m.lambda.clone()).collect(),
            coeffs: modes.iter().map(|m| m.coeff.clone()).collect(),
            modes,
            evec_columns,
            rho_sep: sep.rho.clone(),
            m_inf_sep: sep.m_inf.clone(),
            qnorm,
            prec,
        })
    }

    /// Certify windows `1..=N` and the circle at the geometric mean of the
    /// `N`-th and `(N+1)`-th candidate moduli.
    pub fn certify(
        ctx: &OperatorContext,
        n_modes: usize,
        policy: &Policy,
    ) -> Result<Self, ExpansionError> {
        let cand = ctx.candidates();
        if n_modes == 0 || n_modes >= cand.len() {
            return Err(ExpansionError::Domain(format!(
                "mode count {n_modes} out of range"
            )));
        }
        let specs = (1..=n_modes)
            .map(|j| ctx.default_window(j, policy))
            .collect::<Result<Vec<_>, _>>()?;
        let windows = certify_windows(ctx, &specs)
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        let r = (cabs(&cand[n_modes - 1]).to_f64() * cabs(&cand[n_modes]).to_f64()).sqrt();
        let sep = certify_separating_circle(ctx, r, policy)?;
        Self::from_parts(&windows, &sep, ctx.n())
    }

    /// `√π (tail(n) + Σ_{j ≥ j0} |λ_j|^n err_j)`.
    pub fn error_bound(&self, n: u64, j0: usize) -> BallReal {
        let mut s = tail_bound(self, n).mag_upper();
        for m in self.modes.iter().skip(j0.saturating_sub(1)) {
            let l = m.lambda.abs_upper();
            let mut ln = Mag::from_f64(1.0);
            for _ in 0..n {
                ln = ln.mul_up(&l);
            }
            s = s.add_up(&ln.mul_up(&m.error.mag_upper()));
        }
        upper(s.mul_up(&sqrt_pi()))
    }

    /// `Σ_{j0 ≤ j ≤ N} λ_j^n ℓ_j ∫₀ˣ v_j`, accumulated from `j = N` down so
    /// that consecutive partial sums differ by exactly one term.
    pub fn partial_sums(&self, n: u64, x: &BallReal) -> Vec<BallComplex> {
        let p = self.prec;
        let ints = monomial_integrals(x, self.evec_columns.rows(), p);
        let mut out = vec![BallComplex::zero(p); self.n_modes + 1];
        for j in (0..self.n_modes).rev() {
            out[j] = out[j + 1].add(&self.term(j, n, &ints), p);
        }
        out
    }

    /// `λ_j^n ℓ_j ∫₀ˣ v_j` for the 0-based mode `j`.
    pub fn term(&self, j: usize, n: u64, ints: &[BallReal]) -> BallComplex {
        let p = self.prec;
        let m = &self.modes[j];
        let iv = m
            .vector
            .iter()
            .zip(ints)
            .fold(BallComplex::zero(p), |s, (v, i)| {
                s.add(&v.mul_real(i, p), p)
            });
        m.lambda.pow_u(n, p).mul(&m.coeff, p).mul(&iv, p)
    }
}

/// `∫₀ˣ (t − 1)^k dt = ((x − 1)^{k+1} − (−1)^{k+1})/(k + 1)` for `k < dim`.
pub fn monomial_integrals(x: &BallReal, dim: usize, prec: u32) -> Vec<BallReal> {
    let s = x.sub(&BallReal::from_f64(1.0, prec), prec);
    let mut pw = s.clone();
    (0..dim)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let num = pw.add(&BallReal::from_f64(sign, prec), prec);
            pw = pw.mul(&s, prec);
            num.div(&BallReal::from_i64(k as i64 + 1, prec), prec)
                .expect("k + 1 > 0")
        })
        .collect()
}

/// `F_n^{(j0)}` with its error on the grid `x_i = i/(count − 1)`.
pub fn expansion_eval(
    cert: &ExpansionCertificate,
    n: u64,
    grid: usize,
    j0: usize,
) -> Result<Vec<ExpansionPoint>, ExpansionError> {
    if grid < 2 {
        return Err(ExpansionError::Domain(
            "grid needs at least two points".into(),
        ));
    }
    if j0 == 0 || j0 > cert.n_modes + 1 {
        return Err(ExpansionError::Domain(format!(
            "j0 = {j0} outside 1..={}",
            cert.n_modes + 1
        )));
    }
    let err = cert.error_bound(n, j0);
    (0..grid)
        .map(|i| {
            let x = BallReal::from_ratio(i as i64, grid as i64 - 1, cert.prec)?;
            let value = cert.partial_sums(n, &x).swap_remove(j0 - 1);
            Ok(ExpansionPoint {
                x: x.mid_f64(),
                value,
                error: err.clone(),
            })
        })
        .collect()
}

/// `|G_n(x) − log₂(1 + x)| ≤ |F_n^{(2)}(x)| + error`, with `G_n(x) = ∫₀ˣ L^n 1`.
pub fn gauss_kuzmin_error(cert: &ExpansionCertificate, n: u64, x: &BallReal) -> BallReal {
    let f = if cert.n_modes >= 2 {
        cert.partial_sums(n, x).swap_remove(1)
    } else {
        ComplexBall::zero(cert.prec)
    };
    upper(f.abs_upper().add_up(&cert.error_bound(n, 2).mag_upper()))
}

/// CSV with one row per grid point.
pub fn to_csv(rows: &[(u64, usize, ExpansionPoint)]) -> String {
    let mut s = String::from("n,j0,x,value_mid,value_rad,error_bound\n");
    for (n, j0, p) in rows {
        s.push_str(&format!(
            "{n},{j0},{},{:.17e},{:.3e},{:.3e}\n",
            p.x,
            p.value_mid(),
            p.value_rad(),
            p.error.upper_f64()
        ));
    }
    s
}
