//! Bound on the block `B = Π_K L (I − Π_K)` of the truncated operator.
//!
//! `L_K = Π_K L` has matrix `[[A_K, B], [0, 0]]` in the splitting
//! `range Π_K ⊕ ker Π_K`, so its resolvent involves `B` as well as
//! `(zI − A_K)^{-1}`. We bound `‖B‖` by its Hilbert–Schmidt norm: columns
//! `K < k ≤ K₂` are assembled exactly as for `A_K`, and columns beyond `K₂`
//! use `‖Lφ_k‖ ≤ sup_D |Lφ_k| ≤ Σ_n n^{-2} ((n+1)/(n+2))^k ≤ 3/k + 4.88/k²`.

use ball_core::scalar::float_of_mag;
use ball_core::{BallReal, Mag, MpFloat};
use rayon::prelude::*;

use crate::assemble::assemble_row;
use crate::error::GkwError;
use crate::zeta::hurwitz_zeta_int_table;

#[derive(Clone, Debug)]
pub struct CouplingBound {
    pub k: usize,
    pub k2: usize,
    /// `≥ ‖B‖₂`.
    pub norm: BallReal,
    /// Squared Frobenius mass of the assembled columns (upper bound).
    pub explicit_sq: Mag,
    /// Upper bound on the squared mass of the columns beyond `K₂`.
    pub tail_sq: Mag,
}

/// Default number of explicitly assembled columns.
pub fn default_coupling_columns(k: usize) -> usize {
    2 * k + 128
}

/// `Σ_{k>K₂} (3/k + 4.88/k²)² ≤ 9/K₂ + 14.64/K₂² + 7.94/K₂³`.
pub fn column_tail_sq(k2: usize) -> Mag {
    let x = Mag::from_f64(k2 as f64);
    let x2 = x.mul_down(&x);
    let x3 = x2.mul_down(&x);
    Mag::from_f64(9.0)
        .div_up(&x)
        .add_up(&Mag::from_f64(14.64).div_up(&x2))
        .add_up(&Mag::from_f64(7.94).div_up(&x3))
}

/// Certified `‖Π_K L (I − Π_K)‖` with columns up to `k2` assembled explicitly.
pub fn coupling_bound(k: usize, k2: usize) -> Result<CouplingBound, GkwError> {
    if k2 <= k {
        return Err(GkwError::Domain("coupling needs K2 > K"));
    }
    // forward differences of order k2 cancel about k2 bits
    let wp = 2 * k2 as u32 + 64;
    let zeta = hurwitz_zeta_int_table((k + k2 + 2) as u32, 2, wp)?;
    let rows: Vec<Mag> = (0..=k)
        .into_par_iter()
        .map(|l| {
            let row = assemble_row(l, k2, &zeta, wp);
            row[k + 1..].iter().fold(Mag::ZERO, |s, v| {
                let m = v.mag_upper();
                s.add_up(&m.mul_up(&m))
            })
        })
        .collect();
    let explicit_sq = rows.iter().fold(Mag::ZERO, |s, x| s.add_up(x));
    let tail_sq = column_tail_sq(k2);
    let norm = explicit_sq.add_up(&tail_sq).sqrt_up();
    Ok(CouplingBound {
        k,
        k2,
        norm: BallReal::exact(MpFloat(float_of_mag(&norm))),
        explicit_sq,
        tail_sq,
    })
}
