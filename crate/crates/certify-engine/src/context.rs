//! The operator-level data a window certification needs.

use std::sync::Arc;

use ball_core::{
    cabs, BallComplex, BallMatrixMp, BallReal, ComplexBall, Cplx, FloatMatrixMp, MpFloat,
    RealScalar,
};
use gkw_model::{assemble_matrix, coupling_bound, default_coupling_columns, GKWMatrix};
use validated_linalg::bound::ball_of_mag;
use validated_linalg::{approx_schur, SamplingMode};

use crate::EngineError;

/// Truncation data: `‖L − L_K‖ ≤ eps_k`, `C ≥ max(‖L‖, ‖L_K‖)`, and the
/// matrix `A` of `L_K` on its range with an unvalidated Schur form.
///
/// With `coupling = Some(b)` the truncation is one-sided, `L_K = Π_K L`, whose
/// complement block `Π_K L (I − Π_K)` has norm at most `b`. With `None`, `L_K`
/// is the matrix itself.
#[derive(Clone, Debug)]
pub struct OperatorContext {
    pub k: usize,
    pub prec: u32,
    pub a: BallMatrixMp,
    pub eps_k: BallReal,
    pub c: BallReal,
    pub coupling: Option<BallReal>,
    pub schur: Arc<(FloatMatrixMp, FloatMatrixMp)>,
}

/// Window geometry and sampling options.
#[derive(Clone, Debug)]
pub struct WindowSpec {
    /// 1-based candidate index when the window targets one eigenvalue.
    pub index: Option<usize>,
    pub center: BallComplex,
    pub rho: BallReal,
    pub m: usize,
    pub max_m: usize,
    pub mode: SamplingMode,
}

/// Two-stage sampling policy: full resolvent for the first `n_full`
/// windows, leading-block splitting of size `block` beyond.
#[derive(Clone, Copy, Debug)]
pub struct Policy {
    pub n_full: usize,
    pub block: usize,
    pub m: usize,
    pub max_m: usize,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            n_full: 5,
            block: 8,
            m: 256,
            max_m: 4096,
        }
    }
}

impl OperatorContext {
    /// General constructor for a user-supplied matrix and budget.
    pub fn new(
        k: usize,
        a: BallMatrixMp,
        eps_k: BallReal,
        c: BallReal,
        coupling: Option<BallReal>,
    ) -> Result<Self, EngineError> {
        if a.rows() != a.cols() {
            return Err(EngineError::Domain("matrix must be square".into()));
        }
        let prec = a.prec();
        let schur = approx_schur(&a.mid())?;
        Ok(OperatorContext {
            k,
            prec,
            a,
            eps_k,
            c,
            coupling,
            schur: Arc::new(schur),
        })
    }

    /// Context for the Gauss map operator from an assembled matrix.
    /// `C = min(C₂, √(‖A‖² + b²) + ε_K)` bounds both `‖L‖` and `‖Π_K L‖`.
    pub fn from_gkw(m: &GKWMatrix) -> Result<Self, EngineError> {
        let budget = m.budget()?;
        let coupling = coupling_bound(m.k, default_coupling_columns(m.k))?;
        let eps = budget.eps_upper();
        let na = m.a.norm2_upper_mag();
        let b = coupling.norm.mag_upper();
        let direct = na
            .mul_up(&na)
            .add_up(&b.mul_up(&b))
            .sqrt_up()
            .add_up(&eps.mag_upper());
        let c = ball_of_mag(direct.min(budget.c2.mag_upper()));
        OperatorContext::new(m.k, m.a.clone(), eps, c, Some(coupling.norm))
    }

    pub fn gkw(k: usize, prec: u32) -> Result<Self, EngineError> {
        OperatorContext::from_gkw(&assemble_matrix(k, prec)?)
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Diagonal positions of the candidate Schur form sorted by decreasing modulus.
    pub fn candidate_order(&self) -> Vec<usize> {
        let t = &self.schur.1;
        let mut idx: Vec<usize> = (0..self.n()).collect();
        idx.sort_by(|&i, &j| {
            let (a, b) = (cabs(&t[(i, i)]).to_f64(), cabs(&t[(j, j)]).to_f64());
            b.partial_cmp(&a)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(i.cmp(&j))
        });
        idx
    }

    /// Candidate eigenvalues in order of decreasing modulus.
    pub fn candidates(&self) -> Vec<Cplx<MpFloat>> {
        let t = &self.schur.1;
        self.candidate_order()
            .into_iter()
            .map(|i| t[(i, i)].clone())
            .collect()
    }

    /// Smallest distance from `z` to a candidate other than position `skip`.
    fn min_distance(&self, z: &Cplx<MpFloat>, skip: Option<usize>) -> f64 {
        let t = &self.schur.1;
        (0..self.n())
            .filter(|&i| Some(i) != skip)
            .map(|i| cabs(&(t[(i, i)].clone() - z.clone())).to_f64())
            .fold(f64::INFINITY, f64::min)
    }

    /// Circle around the `j`-th candidate (1-based) with radius a third of the
    /// distance to the nearest other candidate.
    pub fn default_window(&self, j: usize, policy: &Policy) -> Result<WindowSpec, EngineError> {
        let order = self.candidate_order();
        let pos = *order
            .get(j.wrapping_sub(1))
            .ok_or_else(|| EngineError::Domain(format!("no candidate {j}")))?;
        let z = self.schur.1[(pos, pos)].clone();
        let d = self.min_distance(&z, Some(pos));
        let mode = if j > policy.n_full {
            SamplingMode::Block {
                split: policy.block,
            }
        } else {
            SamplingMode::Full
        };
        Ok(WindowSpec {
            index: Some(j),
            center: ComplexBall::exact(&z),
            rho: BallReal::from_f64(d / 3.0, 128),
            m: policy.m,
            max_m: policy.max_m,
            mode,
        })
    }

    /// Circle on the negative axis between the moduli of candidates `j` and
    /// `j+1`, expected to contain no spectrum.
    pub fn gap_window(&self, j: usize, policy: &Policy) -> Result<WindowSpec, EngineError> {
        let cand = self.candidates();
        if j == 0 || j >= cand.len() {
            return Err(EngineError::Domain(format!("no gap after candidate {j}")));
        }
        let r1 = cabs(&cand[j - 1]).to_f64();
        let r2 = cabs(&cand[j]).to_f64();
        let c = -(r1 + r2) / 2.0;
        let p = self.prec;
        let z = Cplx::new(MpFloat::from_f64_prec(c, p), MpFloat::from_f64_prec(0.0, p));
        let d = self.min_distance(&z, None);
        Ok(WindowSpec {
            index: None,
            center: ComplexBall::exact(&z),
            rho: BallReal::from_f64(d / 3.0, 128),
            m: policy.m,
            max_m: policy.max_m,
            mode: SamplingMode::Full,
        })
    }

    /// Explicit circle.
    pub fn window(&self, center: (f64, f64), rho: f64, policy: &Policy) -> WindowSpec {
        WindowSpec {
            index: None,
            center: BallComplex::from_f64(center.0, center.1, self.prec),
            rho: BallReal::from_f64(rho, 128),
            m: policy.m,
            max_m: policy.max_m,
            mode: SamplingMode::Full,
        }
    }
}
