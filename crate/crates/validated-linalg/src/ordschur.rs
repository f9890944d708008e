//! Reordering of triangular Schur forms by adjacent unitary swaps.

use ball_core::{cabs, conj, BallFloat, BallMatrix, BallReal, Cplx, FloatMatrix, RealScalar};

use crate::bound::{ball_of_mag, one};
use crate::schur::unitarity_defect;
use crate::LinalgError;

/// Swap the diagonal entries `k, k+1` of upper triangular `t` by a unitary
/// similarity, accumulating it into `u`.
pub fn swap_adjacent<R: RealScalar>(t: &mut FloatMatrix<R>, u: &mut FloatMatrix<R>, k: usize) {
    let n = t.rows();
    let a = t[(k, k)].clone();
    let b = t[(k, k + 1)].clone();
    let c = t[(k + 1, k + 1)].clone();
    // eigenvector of the 2×2 block for eigenvalue c
    let x1 = b;
    let x2 = c - a;
    let nx = cabs(&x1).hypot(&cabs(&x2));
    if nx.is_zero() {
        return;
    }
    let g11 = Cplx::new(x1.re.clone() / nx.clone(), x1.im.clone() / nx.clone());
    let g21 = Cplx::new(x2.re.clone() / nx.clone(), x2.im.clone() / nx);
    // G = [[g11, −ḡ21], [g21, ḡ11]] is unitary with first column ∝ x
    let (gr11, gr12, gr21, gr22) = (g11.clone(), -conj(&g21), g21, conj(&g11));
    // rows k, k+1 ← G* rows
    for j in k..n {
        let y1 = t[(k, j)].clone();
        let y2 = t[(k + 1, j)].clone();
        t[(k, j)] = conj(&gr11) * y1.clone() + conj(&gr21) * y2.clone();
        t[(k + 1, j)] = conj(&gr12) * y1 + conj(&gr22) * y2;
    }
    apply_right(t, k, &gr11, &gr12, &gr21, &gr22, k + 2);
    apply_right(u, k, &gr11, &gr12, &gr21, &gr22, n);
    let p = t.prec();
    t[(k + 1, k)] = Cplx::new(R::from_f64_prec(0.0, p), R::from_f64_prec(0.0, p));
}

fn apply_right<R: RealScalar>(
    m: &mut FloatMatrix<R>,
    k: usize,
    g11: &Cplx<R>,
    g12: &Cplx<R>,
    g21: &Cplx<R>,
    g22: &Cplx<R>,
    rows: usize,
) {
    for i in 0..rows {
        let y1 = m[(i, k)].clone();
        let y2 = m[(i, k + 1)].clone();
        m[(i, k)] = y1.clone() * g11.clone() + y2.clone() * g21.clone();
        m[(i, k + 1)] = y1 * g12.clone() + y2 * g22.clone();
    }
}

/// Move the diagonal entries at positions `order` (in the input `t`) to the
/// front, in that order. Returns `(Û, T̃)` with `T Û ≈ Û T̃`.
pub fn ordschur_select<R: RealScalar>(
    t: &FloatMatrix<R>,
    order: &[usize],
) -> (FloatMatrix<R>, FloatMatrix<R>) {
    let n = t.rows();
    let mut tt = t.upper_triangular();
    let mut u = FloatMatrix::identity(n, t.prec());
    let mut perm: Vec<usize> = (0..n).collect();
    for (target, &orig) in order.iter().enumerate() {
        let Some(cur) = perm.iter().position(|&x| x == orig) else {
            continue;
        };
        for k in (target..cur).rev() {
            swap_adjacent(&mut tt, &mut u, k);
            perm.swap(k, k + 1);
        }
    }
    (u, tt)
}

#[derive(Clone, Debug)]
pub struct OrdschurCertificate<F: BallFloat> {
    pub u_hat: FloatMatrix<F>,
    pub t_tilde: FloatMatrix<F>,
    /// `≥ ‖T Û − Û T̃‖₂`.
    pub delta_ord: BallReal,
    /// `≥ ‖I − Û*Û‖₂`.
    pub delta_u: BallReal,
    /// `≥ δ_ord / √(1 − δ_U)`.
    pub norm_e_ord: BallReal,
    /// `≥ κ(Û)`.
    pub kappa_u: BallReal,
}

pub fn certify_ordschur<F: BallFloat>(
    t: &FloatMatrix<F>,
    u_hat: &FloatMatrix<F>,
    t_tilde: &FloatMatrix<F>,
) -> Result<OrdschurCertificate<F>, LinalgError> {
    let prec = t.prec();
    let tt = t_tilde.upper_triangular();
    let delta_u = unitarity_defect(u_hat, prec)?;
    if delta_u >= one() {
        return Err(LinalgError::NotUnitary {
            what: "U",
            delta: delta_u.to_f64_up(),
        });
    }
    let tb = BallMatrix::from_float(&t.upper_triangular());
    let ub = BallMatrix::from_float(u_hat);
    let ttb = BallMatrix::from_float(&tt);
    let delta_ord = tb
        .mul(&ub, prec)?
        .sub(&ub.mul(&ttb, prec)?, prec)?
        .norm2_upper_mag();
    let norm_e_ord = delta_ord.div_up(&one().sub_down(&delta_u).sqrt_down());
    let kappa_u = one()
        .add_up(&delta_u)
        .div_up(&one().sub_down(&delta_u))
        .sqrt_up();
    Ok(OrdschurCertificate {
        u_hat: u_hat.clone(),
        t_tilde: tt,
        delta_ord: ball_of_mag(delta_ord),
        delta_u: ball_of_mag(delta_u),
        norm_e_ord: ball_of_mag(norm_e_ord),
        kappa_u: ball_of_mag(kappa_u),
    })
}
