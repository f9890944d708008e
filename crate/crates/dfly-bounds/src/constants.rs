//! DFLY constants and the iterated one-step bounds.

use ball_core::BallReal;

use crate::{positive, DflyError, PREC};

/// Constants of the one-step bounds `‖Lu‖_s ≤ a‖u‖_s + b‖u‖_w`,
/// `‖Lu‖_w ≤ M‖u‖_w`, shared by `L` and `L_k`.
#[derive(Clone, Debug)]
pub struct DflyConstants {
    pub a: BallReal,
    pub b: BallReal,
    pub m: BallReal,
    /// `‖i‖_{s→w}`.
    pub e_sw: BallReal,
    /// `sup ‖u‖_s/‖u‖_w` on the range of `L_k`.
    pub e_kws: BallReal,
    /// `‖L − L_k‖_{s→w}`.
    pub delta_k: BallReal,
    pub mu: BallReal,
}

impl DflyConstants {
    fn check_interval(&self) -> Result<(), DflyError> {
        positive("a", &self.a)?;
        positive("mu - a", &self.mu.sub(&self.a, PREC))?;
        positive("M - mu", &self.m.sub(&self.mu, PREC))?;
        Ok(())
    }

    /// `|log(μ/M)| / |log(a/M)|`.
    pub fn q_bar(&self) -> Result<BallReal, DflyError> {
        self.check_interval()?;
        let lm = self.mu.div(&self.m, PREC)?.log(PREC)?.abs();
        let la = self.a.div(&self.m, PREC)?.log(PREC)?.abs();
        Ok(lm.div(&la, PREC)?)
    }

    /// `1 + b/(M − a)`.
    pub fn c_star(&self) -> Result<BallReal, DflyError> {
        let d = positive("M - a", &self.m.sub(&self.a, PREC))?;
        Ok(BallReal::from_f64(1.0, PREC).add(&self.b.div(&d, PREC)?, PREC))
    }

    /// `N_k = ⌈log E_{k,w→s} / |log(a/M)|⌉`, at least 1, checked against
    /// the two inequalities growth_bound needs:
    /// `a^N E ≤ M^N` and `(M/μ)^N ≤ (M/μ) E^q̄`.
    pub fn n_k(&self) -> Result<u64, DflyError> {
        let la = self.a.div(&self.m, PREC)?.log(PREC)?.abs();
        let le = if self.e_kws.is_positive() {
            self.e_kws.log(PREC)?
        } else {
            BallReal::zero(PREC)
        };
        let ratio = le.div(&la, PREC)?;
        // the ceiling is ambiguous when the ratio ball straddles an integer
        let lo = ratio.lower_f64().ceil().max(1.0) as u64;
        let hi = ratio.upper_f64().ceil().max(1.0) as u64;
        let q = self.q_bar()?;
        let eq = self.e_kws.pow(&q, PREC)?;
        let mm = self.m.div(&self.mu, PREC)?;
        for n in [lo, hi] {
            let damp = self.a.pow_u(n, PREC).mul(&self.e_kws, PREC);
            let grow = mm.pow_u(n, PREC);
            if !self.m.pow_u(n, PREC).sub(&damp, PREC).is_negative()
                && !mm.mul(&eq, PREC).sub(&grow, PREC).is_negative()
            {
                return Ok(n);
            }
        }
        Err(DflyError::Condition {
            what: "N_k interpolation",
            margin: ratio.mid_f64(),
        })
    }

    /// `b_n = b Σ_{j<n} a^{n−1−j} M^j`.
    pub fn b_n(&self, n: u64) -> BallReal {
        let mut s = BallReal::zero(PREC);
        for j in 0..n {
            s = s.add(
                &self
                    .a
                    .pow_u(n - 1 - j, PREC)
                    .mul(&self.m.pow_u(j, PREC), PREC),
                PREC,
            );
        }
        self.b.mul(&s, PREC)
    }
}

/// `(a^n, b_n)` for the `n`-step bounds.
pub fn dfly_iterate(c: &DflyConstants, n: u64) -> Result<(BallReal, BallReal), DflyError> {
    if n == 0 {
        return Err(DflyError::Domain("n must be at least 1".into()));
    }
    Ok((c.a.pow_u(n, PREC), c.b_n(n)))
}
