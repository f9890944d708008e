//! Certification of one spectral window.

use std::sync::Arc;

use ball_core::{
    cabs, Ball, BallComplex, BallMatrix, BallReal, ComplexBall, Cplx, Mag, MpFloat, RealScalar,
};
use validated_linalg::bound::{ball_of_mag, one};
use validated_linalg::{
    certify_schur, contour_resolvent_sup, lift_to_matrix_resolvent, ordschur_select,
    projector_error_decomposition, sigmin_lower_ball, ContourCertificate, LinalgError,
    SamplingMode, SchurCertificate,
};

use crate::context::{OperatorContext, WindowSpec};
use crate::gates::{
    eigenvalue_enclosure, eigenvector_bound, lift_resolvent, one_sided_resolvent, projector_bound,
    small_gain,
};
use crate::EngineError;

const SCALAR_PREC: u32 = 128;

/// Operator-level conclusions for one window.
#[derive(Clone, Debug)]
pub struct EigenEnclosure {
    /// 1-based candidate index, if the window targets one.
    pub index: Option<usize>,
    /// Certified number of eigenvalues (with algebraic multiplicity) inside.
    pub multiplicity: usize,
    pub simple: bool,
    /// Enclosure of the eigenvalue of `L` (simple windows only).
    pub lambda: Option<BallComplex>,
    /// Enclosure of the eigenvalue of the finite matrix.
    pub lambda_k: Option<BallComplex>,
    pub beta: BallReal,
    /// `≥ sup_Γ ‖(zI − A)^{-1}‖`.
    pub m_a: BallReal,
    /// `≥ sup_Γ ‖(zI − L_K)^{-1}‖`.
    pub m_lk: BallReal,
    pub alpha: BallReal,
    /// `≥ sup_Γ ‖(zI − L)^{-1}‖`.
    pub m_inf: BallReal,
    /// `≥ ‖P_L − P_{L_K}‖` over the window.
    pub theta: BallReal,
    pub evec_err: Option<BallReal>,
    /// `≥ ‖P_A − W P_T̃ W^{-1}‖` for the certified Schur basis.
    pub p_fin: Option<BallReal>,
    pub eps_k: BallReal,
    pub k: usize,
    pub contour: ContourCertificate,
    /// Reordered Schur basis `W` with the window eigenvalue leading.
    pub basis: Arc<SchurCertificate<MpFloat>>,
}

impl EigenEnclosure {
    pub fn rho(&self) -> &BallReal {
        &self.contour.rho
    }
    pub fn center(&self) -> &BallComplex {
        &self.contour.center
    }
}

/// Diagonal positions to move to the front: inside candidates by distance to
/// the centre, then (block mode) the nearest others up to the split size.
fn selection(
    t: &ball_core::FloatMatrixMp,
    c: &Cplx<MpFloat>,
    rho: f64,
    mode: SamplingMode,
) -> (Vec<usize>, SamplingMode) {
    let n = t.rows();
    let mut by_dist: Vec<(f64, usize)> = (0..n)
        .map(|i| (cabs(&(t[(i, i)].clone() - c.clone())).to_f64(), i))
        .collect();
    by_dist.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });
    let inside = by_dist.iter().filter(|(d, _)| *d < rho).count();
    match mode {
        SamplingMode::Block { split } => {
            let s = split.max(inside).min(n);
            let order = by_dist[..s].iter().map(|x| x.1).collect();
            let mode = if s < n {
                SamplingMode::Block { split: s }
            } else {
                SamplingMode::Full
            };
            (order, mode)
        }
        SamplingMode::Full => (
            by_dist[..inside].iter().map(|x| x.1).collect(),
            SamplingMode::Full,
        ),
    }
}

/// `|z|` and its distance to a circle as balls at low precision.
pub(crate) fn circle_offset(z: &Cplx<MpFloat>, c: &BallComplex, rho: &BallReal) -> BallReal {
    let p = SCALAR_PREC;
    ComplexBall::exact(z).sub(c, p).abs_ball(p).sub(rho, p)
}

/// Enclosure of the eigenvalue of `A = W(T̃ + G)W^{-1}` near `T̃₀₀`, where
/// `‖G‖ ≤ g`: on `|z − T̃₀₀| = r` the resolvent of `T̃` is at most
/// `(1 + ‖t‖/(s − r))/r + 1/(s − r)` with `t = T̃[0, 1..]` and
/// `s ≤ σ_min(T̃₀₀ − T̃₂₂)`, so `g` times this `< 1` isolates one eigenvalue.
pub fn finite_eigenvalue(
    cert: &SchurCertificate<MpFloat>,
    g: Mag,
) -> Result<BallComplex, EngineError> {
    let tt = &cert.t;
    let n = tt.rows();
    let lam = tt[(0, 0)].clone();
    if n == 1 {
        return Ok(ComplexBall::exact(&lam).inflate(g));
    }
    let tb = BallMatrix::from_float(tt);
    let tn = tb.block(0, 1, 1, n).frobenius_upper();
    let t22 = tb.block(1, n, 1, n);
    let shifted = t22
        .shift_neg(&ComplexBall::exact(&lam), tt.prec())?
        .to_f64_ball();
    let (s22, _) = sigmin_lower_ball(&shifted, None);
    if s22.is_zero() {
        return Err(EngineError::Eigenvalue("leading eigenvalue not separated"));
    }
    let mut r = g.mul_up(&one().add_up(&tn.div_up(&s22))).mul_2exp(1);
    if r.is_zero() {
        r = Mag::pow2(-(tt.prec() as i64) - 8);
    }
    for _ in 0..64 {
        let s = s22.sub_down(&r);
        if s.is_zero() || r.mul_2exp(1) > s22 {
            break;
        }
        let bound = one()
            .add_up(&tn.div_up(&s))
            .div_up(&r)
            .add_up(&one().div_up(&s));
        if g.mul_up(&bound) < one() {
            return Ok(ComplexBall::exact(&lam).inflate(r));
        }
        r = r.mul_2exp(2);
    }
    Err(EngineError::Eigenvalue(
        "no isolating disc around the leading eigenvalue",
    ))
}

pub(crate) fn contour_with_doubling(
    t: &ball_core::BallMatrixMp,
    spec: &WindowSpec,
    mode: SamplingMode,
) -> Result<ContourCertificate, EngineError> {
    let mut m = spec.m.max(4);
    loop {
        match contour_resolvent_sup(t, &spec.center, &spec.rho, m, mode) {
            Ok(c) => return Ok(c),
            Err(LinalgError::ContourNotCertified { .. }) if m * 2 <= spec.max_m => m *= 2,
            Err(e) => return Err(e.into()),
        }
    }
}

/// Run the gate chain: contour, Neumann lift to `A`, one-sided truncation
/// resolvent, small gain, multiplicity count, projector and eigenvalue bounds.
pub fn certify_window(
    ctx: &OperatorContext,
    spec: &WindowSpec,
) -> Result<EigenEnclosure, EngineError> {
    let (q, t) = &*ctx.schur;
    let c = spec.center.mid();
    let rho_f = spec.rho.mid().to_f64();
    if !(rho_f > 0.0) {
        return Err(EngineError::Domain("window radius must be positive".into()));
    }
    let (order, mode) = selection(t, &c, rho_f, spec.mode);
    let (u, tt) = ordschur_select(t, &order);
    let w = q.mul(&u)?;
    let cert = certify_schur(&ctx.a, &w, &tt)?;
    let tb = BallMatrix::from_float(&cert.t);
    let contour = contour_with_doubling(&tb, spec, mode)?;
    let lifted = lift_to_matrix_resolvent(&cert, &contour)?;
    let m_a = lifted.m_a.clone().expect("populated by lift");
    let beta = lifted.beta.clone().expect("populated by lift");
    let m_lk = match &ctx.coupling {
        Some(b) => {
            let p = SCALAR_PREC;
            let outside_zero = lifted.rho.lt(&lifted.center.abs_ball(p));
            if !outside_zero {
                return Err(EngineError::EnclosesZero);
            }
            ball_of_mag(one_sided_resolvent(
                m_a.mag_upper(),
                b.mag_upper(),
                lifted.min_abs_z.mag_lower(),
            )?)
        }
        None => m_a.clone(),
    };
    let alpha = small_gain(&ctx.eps_k, &m_lk);
    if !(alpha.mag_upper() < one()) {
        return Err(EngineError::Alpha(alpha.upper_f64()));
    }
    let m_inf = lift_resolvent(&m_lk, &alpha)?;

    // homotopy T̃ + sG, s ∈ [0, 1], keeps the count of T̃_ii inside
    let g = cert.similarity_defect();
    let eta = g.mul_up(&lifted.m_t_mag());
    if !(eta < one()) {
        return Err(EngineError::Beta(eta.to_f64_up()));
    }
    let gb = Ball::exact(MpFloat(ball_core::scalar::float_of_mag(&g)));
    let mut inside = Vec::new();
    for i in 0..cert.t.rows() {
        let off = circle_offset(&cert.t[(i, i)], &lifted.center, &lifted.rho);
        if off.abs().mag_lower() <= gb.mag_upper() {
            return Err(EngineError::Ambiguous { index: i });
        }
        if off.is_negative() {
            inside.push(i);
        }
    }
    let multiplicity = inside.len();
    let theta = projector_bound(&lifted.rho, &ctx.eps_k, &m_lk)?;
    let p_fin = projector_error_decomposition(&cert, None, &lifted).ok();
    let (lambda, lambda_k, evec_err) = if multiplicity == 1 {
        if !(theta.mag_upper() < one()) {
            return Err(EngineError::Theta(theta.upper_f64()));
        }
        if inside[0] != 0 {
            return Err(EngineError::Eigenvalue(
                "window eigenvalue not in leading position",
            ));
        }
        let lk = finite_eigenvalue(&cert, g)?;
        // the isolating disc must sit inside the window
        let reach = circle_offset(&cert.t[(0, 0)], &lifted.center, &lifted.rho).add(
            &Ball::exact(MpFloat(ball_core::scalar::float_of_mag(&lk.rad()))),
            SCALAR_PREC,
        );
        if !reach.is_negative() {
            return Err(EngineError::Eigenvalue("isolating disc leaves the window"));
        }
        let lam = eigenvalue_enclosure(&lk, &ctx.eps_k, &ctx.c, &theta)?;
        // the window itself also encloses the eigenvalue
        let disc = ComplexBall::exact(&lifted.center.mid()).inflate(lifted.rho.mag_upper());
        let lam = if disc.rad() < lam.rad() { disc } else { lam };
        (Some(lam), Some(lk), Some(eigenvector_bound(&theta)?))
    } else {
        (None, None, None)
    };
    Ok(EigenEnclosure {
        index: spec.index,
        multiplicity,
        simple: multiplicity == 1,
        lambda,
        lambda_k,
        beta,
        m_a,
        m_lk,
        alpha,
        m_inf,
        theta,
        evec_err,
        p_fin,
        eps_k: ctx.eps_k.clone(),
        k: ctx.k,
        contour: lifted,
        basis: Arc::new(cert),
    })
}

/// Certify several windows in parallel; results keep the input order.
pub fn certify_windows(
    ctx: &OperatorContext,
    specs: &[WindowSpec],
) -> Vec<Result<EigenEnclosure, EngineError>> {
    use rayon::prelude::*;
    specs.par_iter().map(|s| certify_window(ctx, s)).collect()
}
