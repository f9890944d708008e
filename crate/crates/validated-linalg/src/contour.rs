//! Certified suprema of triangular resolvent norms on sampled circles.

use ball_core::{
    Ball, BallComplex, BallFloat, BallMatrix, BallMatrixF64, BallMatrixMp, BallReal, ComplexBall,
    FloatMatrix, Mag,
};
use rayon::prelude::*;

use crate::bound::{ball_of_mag, neumann_factor, one};
use crate::schur::SchurCertificate;
use crate::svd::sigmin_lower_ball;
use crate::LinalgError;

/// Samples handled sequentially (with warm-started SVDs) per parallel task.
const CHUNK: usize = 8;
/// Working precision for sample points and scalar bounds.
const SCALAR_PREC: u32 = 128;

/// How `σ_min(zI − T)` is bounded at each sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplingMode {
    Full,
    /// Sample only the leading `split × split` block; the trailing block is
    /// bounded once at the centre and coupled through `‖T₁₂‖`.
    Block {
        split: usize,
    },
}

#[derive(Clone, Debug)]
pub struct ContourCertificate {
    pub center: BallComplex,
    pub rho: BallReal,
    pub m: usize,
    /// `≥ 2ρ sin(π/2m)`.
    pub delta_m: BallReal,
    /// Smallest certified sample bound.
    pub s_min: BallReal,
    /// Index of the sample attaining `s_min`.
    pub argmin: usize,
    /// `≤ inf_Γ σ_min(zI − T)`.
    pub s_star: BallReal,
    /// `≥ sup_Γ ‖(zI − T)^{-1}‖`.
    pub m_t: BallReal,
    /// `≤ min_Γ |z|`.
    pub min_abs_z: BallReal,
    pub beta: Option<BallReal>,
    pub m_a: Option<BallReal>,
}

impl ContourCertificate {
    pub fn m_t_mag(&self) -> Mag {
        self.m_t.mag_upper()
    }
    pub fn rho_mag(&self) -> Mag {
        self.rho.mag_upper()
    }
    pub fn m_a_mag(&self) -> Option<Mag> {
        self.m_a.as_ref().map(|b| b.mag_upper())
    }
}

/// The `m` sample points `c + ρ e^{2πiℓ/m}` as balls.
pub fn sample_points(center: &BallComplex, rho: &BallReal, m: usize) -> Vec<BallComplex> {
    let p = SCALAR_PREC;
    let two_pi = BallReal::pi(p).mul_2exp(1, p);
    (0..m)
        .map(|l| {
            let frac = BallReal::from_ratio(l as i64, m as i64, p).expect("m > 0");
            let th = two_pi.mul(&frac, p);
            BallComplex::expi(&th, p).mul_real(rho, p).add(center, p)
        })
        .collect()
}

/// `σ_max` upper bound of the nonnegative majorant `[[1/s1, c/(s1 s2)], [0, 1/s2]]`
/// inverted into a lower bound on `σ_min` of the block triangular matrix.
pub fn block_combine(s1: Mag, s2: Mag, c12: Mag) -> Mag {
    if s1.is_zero() || s2.is_zero() {
        return Mag::ZERO;
    }
    let weyl = s1.min(s2).sub_down(&c12);
    let p = one().div_up(&s1.mul_down(&s1));
    let r = one().div_up(&s2.mul_down(&s2));
    let q = c12
        .mul_up(&c12)
        .div_up(&s1.mul_down(&s1).mul_down(&s2).mul_down(&s2));
    let sum = p.add_up(&q).add_up(&r);
    // 4 det² with det = 1/(s1 s2), rounded down
    let det2 = one()
        .div_down(&s1.mul_up(&s1).mul_up(&s2).mul_up(&s2))
        .mul_2exp(2);
    let root = sum.mul_up(&sum).sub_up(&det2).sqrt_up();
    let smax2 = sum.add_up(&root).mul_2exp(-1);
    let tri = one().div_down(&smax2.sqrt_up());
    weyl.max(tri)
}

/// Lower bound on `σ_min(zI − T)` from the blocks of an upper triangular `T`:
/// both diagonal blocks are bounded separately, `c12 ≥ ‖T₁₂‖`.
pub fn block_sigmin_lower<F: BallFloat>(
    t: &BallMatrix<F>,
    split: usize,
    c12: Mag,
    z: &ComplexBall<F>,
) -> Mag {
    let n = t.rows();
    if split == 0 || split >= n {
        return crate::svd::sigmin_lower(t, z);
    }
    let t11 = t.block(0, split, 0, split);
    let t22 = t.block(split, n, split, n);
    let s1 = crate::svd::sigmin_lower(&t11, z);
    let s2 = crate::svd::sigmin_lower(&t22, z);
    block_combine(s1, s2, c12)
}

fn sample_chunk(t: &BallMatrixF64, zs: &[BallComplex]) -> Vec<Mag> {
    let mut warm: Option<FloatMatrix<f64>> = None;
    zs.iter()
        .map(|z| {
            let zf = z.to_f64_ball();
            let b = t.shift_neg(&zf, 53).expect("square");
            let (s, v) = sigmin_lower_ball(&b, warm.as_ref());
            warm = Some(v);
            s
        })
        .collect()
}

/// Certify `M_T ≥ sup_Γ ‖(zI − T)^{-1}‖` on the circle with the midpoint
/// centre and radius of `center`, `rho`.
pub fn contour_resolvent_sup(
    t: &BallMatrixMp,
    center: &BallComplex,
    rho: &BallReal,
    m: usize,
    mode: SamplingMode,
) -> Result<ContourCertificate, LinalgError> {
    if m < 4 {
        return Err(LinalgError::Dimension(format!("m = {m} < 4 samples")));
    }
    let p = SCALAR_PREC;
    let center = ComplexBall::exact(&center.mid());
    let rho = Ball::exact(rho.mid().clone());
    if !rho.is_positive() {
        return Err(LinalgError::Dimension(
            "contour radius must be positive".into(),
        ));
    }
    let n = t.rows();
    let zs = sample_points(&center, &rho, m);
    let (tf, tail) = match mode {
        SamplingMode::Block { split } if split > 0 && split < n => {
            let t22 = t.block(split, n, split, n).to_f64_ball();
            let c12 = t.block(0, split, split, n).norm2_upper_mag();
            let cf = center.to_f64_ball();
            let (sc, _) = sigmin_lower_ball(&t22.shift_neg(&cf, 53)?, None);
            let s2 = sc.sub_down(&rho.mag_upper());
            if s2.is_zero() {
                return Err(LinalgError::ContourNotCertified {
                    index: 0,
                    s_star: -1.0,
                });
            }
            (t.block(0, split, 0, split).to_f64_ball(), Some((s2, c12)))
        }
        _ => (t.to_f64_ball(), None),
    };
    let chunks: Vec<&[BallComplex]> = zs.chunks(CHUNK).collect();
    let per: Vec<Vec<Mag>> = chunks.par_iter().map(|c| sample_chunk(&tf, c)).collect();
    let mut s: Vec<Mag> = per.into_iter().flatten().collect();
    if let Some((s2, c12)) = tail {
        for x in s.iter_mut() {
            *x = block_combine(*x, s2, c12);
        }
    }
    let (argmin, s_min) =
        s.iter().enumerate().fold(
            (0, Mag::INF),
            |(bi, bm), (i, x)| if *x < bm { (i, *x) } else { (bi, bm) },
        );
    let half_angle = BallReal::pi(p).mul(&BallReal::from_ratio(1, 2 * m as i64, p)?, p);
    let delta_m = half_angle.sin(p).mul(&rho, p).mul_2exp(1, p).mag_upper();
    let s_star = s_min.sub_down(&delta_m);
    if s_star.is_zero() {
        return Err(LinalgError::ContourNotCertified {
            index: argmin,
            s_star: s_min.to_f64_down() - delta_m.to_f64_up(),
        });
    }
    let m_t = one().div_up(&s_star);
    let min_abs_z = center.abs_ball(p).sub(&rho, p).mag_lower();
    Ok(ContourCertificate {
        center,
        rho,
        m,
        delta_m: ball_of_mag(delta_m),
        s_min: ball_of_mag(s_min),
        argmin,
        s_star: ball_of_mag(s_star),
        m_t: ball_of_mag(m_t),
        min_abs_z: ball_of_mag(min_abs_z),
        beta: None,
        m_a: None,
    })
}

/// Transfer the triangular bound to `A` through the Schur defects:
/// `β = κ² M_T ‖E‖`, `M_A = κ² M_T / (1 − β)`.
pub fn lift_to_matrix_resolvent<F: BallFloat>(
    schur: &SchurCertificate<F>,
    contour: &ContourCertificate,
) -> Result<ContourCertificate, LinalgError> {
    let k2 = schur.kappa_mag().mul_up(&schur.kappa_mag());
    let kmt = k2.mul_up(&contour.m_t_mag());
    let beta = kmt.mul_up(&schur.norm_e_mag());
    let f = neumann_factor(beta).ok_or(LinalgError::Neumann(beta.to_f64_up()))?;
    let mut out = contour.clone();
    out.beta = Some(ball_of_mag(beta));
    out.m_a = Some(ball_of_mag(kmt.mul_up(&f)));
    Ok(out)
}
