//! Coefficient domains and the series/polynomial carriers built on them.
//!
//! Every computation in this workspace is generic over a [`Domain`]: exact
//! rationals, rational functions in a deformation parameter, number-field
//! quotients of those, or high-precision complex floats. Domain objects carry
//! the context (modulus, precision); elements are plain data.

pub mod complex;
pub mod epspairs;
pub mod laurent;
pub mod multipoly;
pub mod numfield;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use complex::{Cplx, ComplexFloats, Mpf};
pub use epspairs::{EpsPairs, EpsPoly};
pub use laurent::Series;
pub use multipoly::{Caps, Mono, MultiPoly};
pub use numfield::NumberField;
pub use ratfunc::{RatFunc, RatFuncs};
pub use rational::{Rat, Rationals};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

/// A commutative coefficient ring with enough structure for series
/// arithmetic. Exact kinds are fields (every nonzero element inverts);
/// the complex kind inverts up to rounding.
pub trait Domain: Clone + std::fmt::Debug {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_rat(&BigRational::from(BigInt::from(n)))
    }

    fn from_rat(&self, r: &Rat) -> Self::Elem;

    fn pow_i64(&self, a: &Self::Elem, n: i64) -> Result<Self::Elem> {
        let base = if n < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    /// Exact domains return `None`; the complex domain returns `|a|` so that
    /// verification layers can apply tolerances.
    fn abs_approx(&self, _a: &Self::Elem) -> Option<f64> {
        None
    }

    /// Derivative with respect to the domain's deformation parameter, when
    /// one exists.
    fn d_param(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// Principal square root for numeric domains; exact domains decline and
    /// callers must supply branch data through configuration.
    fn sqrt(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    fn fmt_elem(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }

    /// Serialization of scalars: rationals as `{"num","den"}`, polynomial and
    /// number-field elements as `{"coeffs":...}`, floats as
    /// `{"re","im","bits"}`.
    fn elem_to_json(&self, a: &Self::Elem) -> serde_json::Value;
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Self::Elem>;
}

/// Compare an element against zero: exactly for exact domains, within `tol`
/// for numeric ones. Used throughout the verification suites.
pub fn is_zero_within<D: Domain>(dom: &D, a: &D::Elem, tol: f64) -> bool {
    match dom.abs_approx(a) {
        None => dom.is_zero(a),
        Some(m) => m <= tol,
    }
}

/// Magnitude of the difference of two elements, `None` meaning "exactly
/// equal / not equal" for exact domains.
pub fn diff_magnitude<D: Domain>(dom: &D, a: &D::Elem, b: &D::Elem) -> Option<f64> {
    dom.abs_approx(&dom.sub(a, b))
}

pub(crate) fn parse_big_rational(s: &str) -> Result<Rat> {
    use std::str::FromStr;
    BigRational::from_str(s)
        .map_err(|e| Error::config(format!("bad rational literal {s:?}: {e}")))
}

/// (2k-1)!! with the convention (-1)!! = 1.
pub fn double_factorial_odd<D: Domain>(dom: &D, k: i64) -> D::Elem {
    let mut acc = dom.one();
    let mut m = 2 * k - 1;
    while m >= 2 {
        acc = dom.mul(&acc, &dom.from_i64(m));
        m -= 2;
    }
    acc
}

/// Rising factorial x(x+1)...(x+n-1) over the rationals; used for exact
/// gamma-function ratios Γ(x+n)/Γ(x).
pub fn rising_factorial(x: &Rat, n: u32) -> Rat {
    let mut acc = Rat::from(BigInt::from(1));
    for j in 0..n {
        acc *= x + Rat::from(BigInt::from(j as i64));
    }
    acc
}

/// Exact Γ(x+a)/Γ(x+b) for integer offsets a ≥ b or a < b, as a rational
/// function of x evaluated at the rational point x.
pub fn gamma_ratio(x: &Rat, a: i64, b: i64) -> Result<Rat> {
    // Γ(x+a)/Γ(x+b) = (x+b)(x+b+1)...(x+a-1) for a ≥ b, inverse otherwise.
    if a >= b {
        Ok(rising_factorial(&(x + Rat::from(BigInt::from(b))), (a - b) as u32))
    } else {
        let d = rising_factorial(&(x + Rat::from(BigInt::from(a))), (b - a) as u32);
        if d == Rat::from(BigInt::from(0)) {
            return Err(Error::domain("gamma ratio hit a pole".to_string()));
        }
        Ok(Rat::from(BigInt::from(1)) / d)
    }
}
