//! The Gauss–Kuzmin–Wirsing transfer operator `(Lf)(w) = Σ_{n≥1} (w+n)^{-2} f(1/(w+n))`
//! on the Hardy space of the unit disc centred at 1: analytic constants,
//! truncation budgets and ball assembly of the truncated matrix.

pub mod assemble;
pub mod constants;
pub mod coupling;
pub mod error;
pub mod geometry;
pub mod zeta;

pub use assemble::{assemble_matrix, GKWMatrix};
pub use constants::{
    c2_bound, c2_default, default_precision, refine_operator_norm, truncation_budget,
    two_thirds_pow, upper_ball, TruncationBudget, C2_DEFAULT_SPLIT,
};
pub use coupling::{column_tail_sq, coupling_bound, default_coupling_columns, CouplingBound};
pub use error::GkwError;
pub use geometry::{branch_geometry_check, check_point, GeometryReport, Verdict};
pub use zeta::{bernoulli_2k_over_fact, hurwitz_zeta, hurwitz_zeta_int_table};
