//! The rational-function field Q(eps) in one deformation parameter.

use super::poly;
use super::{Domain, Rat, Rationals};
use crate::error::{Error, Result};
use num_traits::{One, Zero};

/// A reduced fraction of polynomials in the parameter, denominator monic.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    pub num: Vec<Rat>,
    pub den: Vec<Rat>,
}

impl RatFunc {
    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
    }
}

/// Domain object for Q(param). Exactly one parameter symbol is supported;
/// every use in this workspace is Q(eps).
#[derive(Clone, Debug, PartialEq)]
pub struct RatFuncs {
    pub param: String,
}

impl RatFuncs {
    pub fn new(param: impl Into<String>) -> Self {
        RatFuncs { param: param.into() }
    }

    /// The parameter itself as an element.
    pub fn gen(&self) -> RatFunc {
        let q = Rationals;
        RatFunc {
            num: vec![Rat::zero(), Rat::one()],
            den: poly::constant(&q, Rat::one()),
        }
    }

    pub fn from_poly(&self, num: Vec<Rat>) -> RatFunc {
        let q = Rationals;
        self.reduce(RatFunc {
            num: poly::normalize(&q, num),
            den: poly::constant(&q, Rat::one()),
        })
    }

    fn reduce(&self, f: RatFunc) -> RatFunc {
        let q = Rationals;
        if f.num.is_empty() {
            return RatFunc {
                num: vec![],
                den: poly::constant(&q, Rat::one()),
            };
        }
        // fast path: monomial denominator c*eps^k (ubiquitous here since
        // the curves make everything Laurent in the deformation parameter)
        if f.den.iter().take(f.den.len() - 1).all(|c| c.is_zero()) {
            let k = f.den.len() - 1;
            let lead = f.den[k].clone();
            let val = f.num.iter().position(|c| !c.is_zero()).unwrap_or(0);
            let strip = val.min(k);
            let li = lead.recip();
            let num: Vec<Rat> = f.num[strip..].iter().map(|c| c * &li).collect();
            let mut den = vec![Rat::zero(); k - strip + 1];
            den[k - strip] = Rat::one();
            return RatFunc { num, den };
        }
        let g = poly::gcd(&q, &f.num, &f.den).expect("gcd over Q cannot fail");
        let (num, den) = if poly::deg::<Rationals>(&g) == Some(0) {
            (f.num, f.den)
        } else {
            let (n, _) = poly::div_rem(&q, &f.num, &g).unwrap();
            let (d, _) = poly::div_rem(&q, &f.den, &g).unwrap();
            (n, d)
        };
        // make denominator monic
        let lead = den.last().cloned().unwrap_or_else(Rat::one);
        let li = lead.recip();
        RatFunc {
            num: poly::scale(&q, &num, &li),
            den: poly::scale(&q, &den, &li),
        }
    }

    /// Evaluate at a rational point (used when embedding into floats and in
    /// randomized identity checks). Errors on a denominator zero.
    pub fn eval_at(&self, f: &RatFunc, x: &Rat) -> Result<Rat> {
        let q = Rationals;
        let d = poly::eval(&q, &f.den, x);
        if d.is_zero() {
            return Err(Error::DivisionByZero("rational function evaluation".into()));
        }
        Ok(poly::eval(&q, &f.num, x) / d)
    }
}

impl Domain for RatFuncs {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc {
            num: vec![],
            den: vec![Rat::one()],
        }
    }
    fn one(&self) -> RatFunc {
        RatFunc {
            num: vec![Rat::one()],
            den: vec![Rat::one()],
        }
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_empty()
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let q = Rationals;
        let num = poly::add(
            &q,
            &poly::mul(&q, &a.num, &b.den),
            &poly::mul(&q, &b.num, &a.den),
        );
        let den = poly::mul(&q, &a.den, &b.den);
        self.reduce(RatFunc { num, den })
    }

    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        let q = Rationals;
        RatFunc {
            num: poly::neg(&q, &a.num),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let q = Rationals;
        self.reduce(RatFunc {
            num: poly::mul(&q, &a.num, &b.num),
            den: poly::mul(&q, &a.den, &b.den),
        })
    }

    fn inv(&self, a: &RatFunc) -> Result<RatFunc> {
        if a.num.is_empty() {
            return Err(Error::DivisionByZero(format!("Q({})", self.param)));
        }
        Ok(self.reduce(RatFunc {
            num: a.den.clone(),
            den: a.num.clone(),
        }))
    }

    fn from_rat(&self, r: &Rat) -> RatFunc {
        let q = Rationals;
        RatFunc {
            num: poly::constant(&q, r.clone()),
            den: vec![Rat::one()],
        }
    }

    fn d_param(&self, a: &RatFunc) -> Option<RatFunc> {
        // (n/d)' = (n'd - nd')/d^2
        let q = Rationals;
        let num = poly::sub(
            &q,
            &poly::mul(&q, &poly::derivative(&q, &a.num), &a.den),
            &poly::mul(&q, &a.num, &poly::derivative(&q, &a.den)),
        );
        let den = poly::mul(&q, &a.den, &a.den);
        Some(self.reduce(RatFunc { num, den }))
    }

    fn fmt_elem(&self, a: &RatFunc) -> String {
        let fmt_poly = |p: &[Rat]| -> String {
            if p.is_empty() {
                return "0".into();
            }
            let mut parts = vec![];
            for (i, c) in p.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = match i {
                    0 => c.to_string(),
                    1 => format!("{}*{}", c, self.param),
                    _ => format!("{}*{}^{}", c, self.param, i),
                };
                parts.push(term);
            }
            parts.join(" + ")
        };
        if a.is_polynomial() {
            fmt_poly(&a.num)
        } else {
            format!("({}) / ({})", fmt_poly(&a.num), fmt_poly(&a.den))
        }
    }

    fn elem_to_json(&self, a: &RatFunc) -> serde_json::Value {
        let q = Rationals;
        let enc = |p: &[Rat]| -> Vec<serde_json::Value> {
            p.iter().map(|c| q.elem_to_json(c)).collect()
        };
        serde_json::json!({
            "param": self.param,
            "coeffs": { "num": enc(&a.num), "den": enc(&a.den) },
        })
    }

    fn elem_from_json(&self, v: &serde_json::Value) -> Result<RatFunc> {
        let q = Rationals;
        let coeffs = v
            .get("coeffs")
            .ok_or_else(|| Error::config("rational-function scalar needs \"coeffs\""))?;
        let dec = |key: &str| -> Result<Vec<Rat>> {
            let arr = coeffs
                .get(key)
                .and_then(|x| x.as_array())
                .ok_or_else(|| Error::config(format!("coeffs.{key} must be an array")))?;
            arr.iter().map(|c| q.elem_from_json(c)).collect()
        };
        let num = poly::normalize(&q, dec("num")?);
        let den = poly::normalize(&q, dec("den")?);
        if den.is_empty() {
            return Err(Error::config("zero denominator polynomial"));
        }
        Ok(self.reduce(RatFunc { num, den }))
    }
}
