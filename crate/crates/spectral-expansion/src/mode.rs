//! One spectral mode: eigenvalue, dual coefficient `ℓ_j(1)` and eigenvector.

use ball_core::{BallComplex, BallReal, ComplexBall, Cplx, Mag, MpFloat, RealScalar};
use certify_engine::EigenEnclosure;

use crate::ExpansionError;

/// `P_j 1 = coeff · vector + e` with `‖e‖ ≤ error` in `H²(D₁)`.
#[derive(Clone, Debug)]
pub struct Mode {
    pub index: usize,
    pub lambda: BallComplex,
    /// `ℓ_j(1)`, for the eigenvector normalised by `v(1/2) > 0`.
    pub coeff: BallComplex,
    /// Shifted-monomial coefficients of the eigenvector.
    pub vector: Vec<BallComplex>,
    /// Finite projector defect plus the operator-level `ϑ_j`.
    pub error: BallReal,
}

impl Mode {
    /// Sign of the real coefficient when its ball excludes zero and its
    /// imaginary part is negligible next to it.
    pub fn sign(&self) -> Option<i8> {
        let re = &self.coeff.re;
        if re.contains_zero() || self.coeff.im.mag_upper() >= re.mag_lower() {
            return None;
        }
        Some(if re.is_positive() { 1 } else { -1 })
    }

    /// `v(x) = Σ v_k (x − 1)^k` at a point, by Horner's rule.
    pub fn eval(&self, x: &BallReal, prec: u32) -> BallComplex {
        let s = ComplexBall::from_real(x.sub(&BallReal::from_f64(1.0, prec), prec));
        self.vector
            .iter()
            .rev()
            .fold(BallComplex::zero(prec), |acc, c| {
                acc.mul(&s, prec).add(c, prec)
            })
    }
}

fn exact(z: &Cplx<MpFloat>) -> BallComplex {
    ComplexBall::exact(z)
}

/// `ℓ = y* W^{-1} e₀` with `y* = [1, t (λ − T₂₂)^{-1}]` the left eigenvector of
/// the reordered triangular form; `W^{-1}` is replaced by `W*` at a cost of
/// `‖y‖ δ/√(1 − δ)`.
pub fn spectral_coefficient(enc: &EigenEnclosure) -> Result<Mode, ExpansionError> {
    let index = enc.index.unwrap_or(0);
    let lambda = match (&enc.lambda, enc.simple) {
        (Some(l), true) => l.clone(),
        _ => return Err(ExpansionError::NotSimple(index)),
    };
    let basis = &enc.basis;
    let (w, t) = (&basis.q, &basis.t);
    let n = t.rows();
    let prec = t.prec().max(64);
    let lam = exact(&t[(0, 0)]);
    let mut x: Vec<BallComplex> = Vec::with_capacity(n.saturating_sub(1));
    for j in 1..n {
        let mut acc = exact(&t[(0, j)]);
        for (i, xi) in x.iter().enumerate() {
            acc = acc.add(&xi.mul(&exact(&t[(i + 1, j)]), prec), prec);
        }
        let piv = lam.sub(&exact(&t[(j, j)]), prec);
        if piv.contains_zero() {
            return Err(ExpansionError::Pivot {
                mode: index,
                index: j,
            });
        }
        x.push(acc.div(&piv, prec)?);
    }
    let q = |i: usize| exact(&w[(0, i)]).conj();
    let mut ell = q(0);
    for (j, xj) in x.iter().enumerate() {
        ell = ell.add(&xj.mul(&q(j + 1), prec), prec);
    }
    let y2 = x.iter().fold(Mag::from_f64(1.0), |s, z| {
        let a = z.abs_upper();
        s.add_up(&a.mul_up(&a))
    });
    let d = basis.delta_mag();
    let infl = y2
        .sqrt_up()
        .mul_up(&d)
        .div_up(&Mag::from_f64(1.0).sub_down(&d).sqrt_down());
    let ell = ell.inflate(infl);

    // phase: make v(1/2) real positive
    let half = MpFloat::from_f64_prec(-0.5, prec);
    let mut v_half = Cplx::new(
        MpFloat::from_f64_prec(0.0, prec),
        MpFloat::from_f64_prec(0.0, prec),
    );
    for k in (0..n).rev() {
        v_half =
            v_half * Cplx::new(half.clone(), MpFloat::from_f64_prec(0.0, prec)) + w[(k, 0)].clone();
    }
    let r = ball_core::cabs(&v_half);
    if r.to_f64() == 0.0 {
        return Err(ExpansionError::Domain(format!(
            "mode {index}: eigenvector vanishes at 1/2"
        )));
    }
    let u = exact(&Cplx::new(
        v_half.re.clone() / r.clone(),
        v_half.im.clone() / r,
    ));
    let coeff = ell.mul(&u, prec);
    let vector = (0..n)
        .map(|k| exact(&w[(k, 0)]).div(&u, prec))
        .collect::<Result<Vec<_>, _>>()?;

    let p_fin = enc
        .p_fin
        .as_ref()
        .ok_or(ExpansionError::ProjectorError(index))?;
    let error = crate::upper(p_fin.mag_upper().add_up(&enc.theta.mag_upper()));
    Ok(Mode {
        index,
        lambda,
        coeff,
        vector,
        error,
    })
}
