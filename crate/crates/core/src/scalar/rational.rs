//! The exact rational field Q.

use super::Domain;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Domain for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn inv(&self, a: &Rat) -> Result<Rat> {
        if a.is_zero() {
            return Err(Error::DivisionByZero("Q".into()));
        }
        Ok(a.recip())
    }
    fn from_i64(&self, n: i64) -> Rat {
        Rat::from(BigInt::from(n))
    }
    fn from_rat(&self, r: &Rat) -> Rat {
        r.clone()
    }
    fn fmt_elem(&self, a: &Rat) -> String {
        a.to_string()
    }
    fn abs_approx(&self, _a: &Rat) -> Option<f64> {
        None
    }

    fn elem_to_json(&self, a: &Rat) -> serde_json::Value {
        serde_json::json!({
            "num": a.numer().to_string(),
            "den": a.denom().to_string(),
        })
    }

    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Rat> {
        let num = v
            .get("num")
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::config("rational scalar needs string field \"num\""))?;
        let den = v
            .get("den")
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::config("rational scalar needs string field \"den\""))?;
        let n: BigInt = num
            .parse()
            .map_err(|e| Error::config(format!("bad numerator {num:?}: {e}")))?;
        let d: BigInt = den
            .parse()
            .map_err(|e| Error::config(format!("bad denominator {den:?}: {e}")))?;
        if d.is_zero() {
            return Err(Error::config("zero denominator"));
        }
        Ok(Rat::new(n, d))
    }
}

/// Best-effort f64 view of a rational, for report text only.
pub fn rat_to_f64(a: &Rat) -> f64 {
    a.to_f64().unwrap_or_else(|| {
        if a.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
