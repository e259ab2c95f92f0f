//! Exact and numeric kernels for topological recursion on spectral curves:
//! coefficient domains, truncated Laurent series, curve charts, the
//! Eynard-Orantin recursion in local form, and Givental calibration data.

pub mod curve;
pub mod error;
pub mod givental;
pub mod scalar;
pub mod tr;

pub use error::{Error, Result};
