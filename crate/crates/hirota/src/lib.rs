//! Truncated tau functions and the Hirota quadratic equation checker.
//!
//! A truncated tau carries log Z = sum hbar^{2g-2+n} (descendent terms)
//! plus the (0,2) quadratic part. The bilinear residue check runs in the
//! doubled variables q, q' with the shift part of the vertex operators
//! substituted exactly and the multiplier expanded to bounded depth in the
//! auxiliary spectral parameter; every checked coefficient carries a trust
//! flag telling whether all correlators that could contribute lie inside
//! the computed window.

pub mod lam;
pub mod report;
pub mod tau;
pub mod vertex;

pub use report::{HqeCoefficient, HqeReport};
pub use tau::{assemble_tau, reduction_check, ReductionReport, TauData};
pub use vertex::{hqe_check, HqeOptions, TrustMode};
