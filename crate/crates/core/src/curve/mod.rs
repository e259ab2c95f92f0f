//! Spectral-curve data: exact rational genus-0 curves, their Airy and
//! boundary charts, Bergman-kernel expansions, and the preferred 1-form
//! bases. The numeric genus-1 backend lives in a separate crate and produces
//! the same [`geometry::LocalGeometry`].

pub mod biseries;
pub mod geometry;
pub mod ratfn;
pub mod rational;

pub use biseries::BiTaylor;
pub use geometry::{boundary_pairing_from_bergman, AiryChart, BoundaryData, LocalGeometry};
pub use ratfn::RatZ;
pub use rational::{RationalCurve, RationalCurveSpec};
