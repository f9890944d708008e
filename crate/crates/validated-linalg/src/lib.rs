//! Certified dense linear algebra: Schur and SVD certificates, triangular
//! resolvent bounds on circles, and projector error bounds.

pub mod bound;
pub mod contour;
pub mod cplx;
pub mod error;
pub mod ordschur;
pub mod projector;
pub mod schur;
pub mod svd;

pub use contour::{
    block_combine, block_sigmin_lower, contour_resolvent_sup, lift_to_matrix_resolvent,
    sample_points, ContourCertificate, SamplingMode,
};
pub use error::LinalgError;
pub use ordschur::{certify_ordschur, ordschur_select, swap_adjacent, OrdschurCertificate};
pub use projector::projector_error_decomposition;
pub use schur::{approx_schur, certify_schur, unitarity_defect, SchurCertificate};
pub use svd::{
    jacobi_svd, jacobi_svd_f64, sigmin_lower, sigmin_lower_ball, svd_enclosure, SingularInterval,
    SvdCandidate, SvdEnclosure,
};
