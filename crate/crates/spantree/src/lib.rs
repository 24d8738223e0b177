//! Exact spanning-tree counts and tree entropies for circulant graphs with
//! linearly scaling generators and for diagonal discrete tori.
//!
//! The crate has three layers:
//!
//! * [`oracle`] counts spanning trees of any multigraph exactly through a
//!   fraction-free determinant of the reduced Laplacian. Slow, but it is the
//!   ground truth everything else is checked against.
//! * [`closed_form`] evaluates the product formulas for the scaled circulant
//!   families and tori in ball arithmetic with automatic precision
//!   escalation, certifying the exact integer count, plus a log-space mode
//!   for sizes where the count itself has billions of digits.
//! * [`entropy`] computes asymptotic tree entropies from both the finite
//!   argcosh sum and the Bessel-integral representation, and compares the
//!   scaled and fixed-generator regimes with certified enclosures.

pub mod angle;
pub mod ball;
pub mod closed_form;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod oracle;

pub use angle::TurnAngle;
pub use ball::RealBall;
pub use closed_form::{
    log_tau_scaled_circulant, log_tau_torus, tau_scaled_circulant, tau_torus, PrecisionPolicy,
};
pub use entropy::{
    compare_nf_vs_f, riemann_limit, riemann_limit_bessel, z_f, z_nf_integral, z_nf_sum,
    CompareRow, CompareTable, Enclosure, EntropyMethod, EntropyReport,
};
pub use error::{Error, Result};
pub use graph::{CirculantSpec, EdgeMultiset, ScaledCirculantFamily, SpectrumPoint, TorusSpec};
pub use oracle::{count_spanning_trees_oracle, BigCount};
