//! Ball assembly of the truncated operator in the shifted monomial basis
//! `φ_k(w) = (w−1)^k`.
//!
//! Column `k` holds the Taylor coefficients at `w = 1` of
//! `Σ_{n≥1} (w+n)^{-2} (1/(w+n) − 1)^k = Σ_i C(k,i) (−1)^i Σ_n (w+n)^{-(k+2-i)}`,
//! and `Σ_n (w+n)^{-p}` has coefficients `(−1)^ℓ C(p+ℓ−1, ℓ) ζ(p+ℓ, 2)`.
//! Hence column `k` is the `k`-th forward difference in `p` of those
//! coefficient sequences, taken from `p = 2`.

use ball_core::{BallComplex, BallMatrixMp, BallReal, Mag};
use rayon::prelude::*;
use rug::Integer;

use crate::constants::{c2_default, truncation_budget, TruncationBudget};
use crate::error::GkwError;
use crate::zeta::hurwitz_zeta_int_table;

/// The `(K+1)×(K+1)` ball matrix of the truncated operator.
#[derive(Clone, Debug)]
pub struct GKWMatrix {
    pub k: usize,
    pub prec: u32,
    pub a: BallMatrixMp,
}

/// Row `ℓ` of the matrix: forward differences of `b_j = (−1)^ℓ C(j+ℓ+1, ℓ) ζ(j+ℓ+2, 2)`.
pub(crate) fn assemble_row(l: usize, k: usize, zeta: &[BallReal], wp: u32) -> Vec<BallReal> {
    let mut diff: Vec<BallReal> = (0..=k)
        .map(|j| {
            let p = j + 2;
            let c = Integer::from(Integer::binomial_u(p as u32 + l as u32 - 1, l as u32));
            let v = BallReal::from_integer(&c, wp).mul(&zeta[p + l - 2], wp);
            if l % 2 == 1 {
                v.neg()
            } else {
                v
            }
        })
        .collect();
    // out[k'] = Δ^{k'} b_0 with (Δb)_j = b_{j+1} − b_j, i.e. Σ C(k',i)(−1)^i b_{k'−i}
    let mut out = Vec::with_capacity(k + 1);
    for m in 0..=k {
        out.push(diff[0].clone());
        for j in 0..(k - m) {
            diff[j] = diff[j + 1].sub(&diff[j], wp);
        }
    }
    out
}

/// Assemble `A_K` at `prec` bits.
pub fn assemble_matrix(k: usize, prec: u32) -> Result<GKWMatrix, GkwError> {
    if prec < 64 {
        return Err(GkwError::Domain("assembly needs at least 64 bits"));
    }
    let wp = prec;
    let zeta = hurwitz_zeta_int_table(2 * k as u32 + 2, 2, wp)?;
    let rows: Vec<Vec<BallReal>> = (0..=k)
        .into_par_iter()
        .map(|l| assemble_row(l, k, &zeta, wp))
        .collect();
    let ceiling = Mag::pow2(-(prec as i64 / 2));
    let mut worst = Mag::ZERO;
    let n = k + 1;
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        for v in row {
            worst = worst.max(v.rad());
            data.push(BallComplex::from_real(v));
        }
    }
    if worst > ceiling {
        return Err(GkwError::PrecisionExhausted {
            radius: worst.to_f64_up(),
            half: prec / 2,
            prec,
        });
    }
    let a = BallMatrixMp::from_vec(n, n, data)?;
    Ok(GKWMatrix { k, prec, a })
}

impl GKWMatrix {
    /// Certified `‖A_K‖₂` (equal to the norm of the truncated operator on its
    /// range, the basis being orthonormal).
    pub fn norm_upper(&self) -> BallReal {
        self.a.norm2_upper()
    }

    pub fn budget(&self) -> Result<TruncationBudget, GkwError> {
        Ok(truncation_budget(self.k, &c2_default(self.prec.min(256))?))
    }

    /// Key-value text form: a header followed by one `a[i,j]` line per entry.
    pub fn to_text(&self, budget: &TruncationBudget) -> String {
        let mut s = String::new();
        s.push_str("format = gkw-matrix-v1\n");
        s.push_str(&format!("K = {}\nprec = {}\n", self.k, self.prec));
        s.push_str(&format!(
            "c2 = {}\neps_K = {}\n",
            budget.c2,
            budget.eps_upper()
        ));
        let n = self.k + 1;
        for i in 0..n {
            for j in 0..n {
                s.push_str(&format!("a[{i},{j}] = {}\n", self.a.get(i, j).re));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<GKWMatrix, GkwError> {
        let mut k = None;
        let mut prec = None;
        let mut entries = Vec::new();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| GkwError::Format(line.to_string()))?;
            let (key, val) = (key.trim(), val.trim());
            match key {
                "K" => {
                    k = Some(
                        val.parse::<usize>()
                            .map_err(|e| GkwError::Format(e.to_string()))?,
                    )
                }
                "prec" => {
                    prec = Some(
                        val.parse::<u32>()
                            .map_err(|e| GkwError::Format(e.to_string()))?,
                    )
                }
                _ if key.starts_with("a[") => entries.push((key.to_string(), val.to_string())),
                _ => {}
            }
        }
        let k = k.ok_or_else(|| GkwError::Format("missing K".into()))?;
        let prec = prec.ok_or_else(|| GkwError::Format("missing prec".into()))?;
        let n = k + 1;
        let mut a = BallMatrixMp::zeros(n, n, prec);
        let mut seen = 0;
        for (key, val) in entries {
            let idx = key.trim_start_matches("a[").trim_end_matches(']');
            let (i, j) = idx
                .split_once(',')
                .ok_or_else(|| GkwError::Format(key.clone()))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| GkwError::Format(key.clone()))?;
            let j: usize = j
                .trim()
                .parse()
                .map_err(|_| GkwError::Format(key.clone()))?;
            if i >= n || j >= n {
                return Err(GkwError::Format(format!("index out of range: {key}")));
            }
            a.set(i, j, BallComplex::from_real(BallReal::parse(&val, prec)?));
            seen += 1;
        }
        if seen != n * n {
            return Err(GkwError::Format(format!(
                "expected {} entries, found {seen}",
                n * n
            )));
        }
        Ok(GKWMatrix { k, prec, a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_entry_is_pi2_over_6_minus_1() {
        let m = assemble_matrix(4, 128).unwrap();
        let pi = BallReal::pi(200);
        let t = pi
            .sqr(200)
            .div(&BallReal::from_f64(6.0, 200), 200)
            .unwrap()
            .sub(&BallReal::from_f64(1.0, 200), 200);
        assert!(m.a.get(0, 0).re.overlaps(&t));
    }

    #[test]
    fn low_precision_is_exhausted() {
        assert!(matches!(
            assemble_matrix(120, 64),
            Err(GkwError::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let m = assemble_matrix(3, 128).unwrap();
        let b = m.budget().unwrap();
        let back = GKWMatrix::from_text(&m.to_text(&b)).unwrap();
        assert!(back.a.contains(&m.a));
    }
}
