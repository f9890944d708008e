//! Operator-level spectral certification from finite contour certificates:
//! exclusion by small gain, multiplicity counts, projector, eigenvalue and
//! eigenvector enclosures, and coarse-to-fine propagation.

pub mod coarse_fine;
pub mod context;
pub mod error;
pub mod gates;
pub mod record;
pub mod separating;
pub mod window;

pub use coarse_fine::{propagate_bounds, propagate_to_fine, FineLevel};
pub use context::{OperatorContext, Policy, WindowSpec};
pub use error::{EngineError, Gate};
pub use gates::{
    coarse_fine_propagate, eigenvalue_enclosure, eigenvalue_radius, eigenvector_bound,
    lift_resolvent, one_sided_resolvent, projector_bound, small_gain,
};
pub use separating::{certify_separating_circle, SeparatingCircle};
pub use window::{certify_window, certify_windows, finite_eigenvalue, EigenEnclosure};
