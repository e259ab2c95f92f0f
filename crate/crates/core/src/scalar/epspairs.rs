//! Fast exact carrier for tau-function work: Laurent polynomials in the
//! deformation parameter over Q[s]/(s^2 - sq), with s a quadratic generator
//! (s^2 = sq, sq not a rational square). Ring operations never run a gcd;
//! inversion is defined exactly for single-monomial elements, which is all
//! the bilinear machinery ever inverts.

use super::{Domain, NumberField, Rat, RatFunc, RatFuncs};
use crate::error::{Error, Result};
use num_traits::{One, Zero};

/// a + b s with s^2 = sq.
type Pair = (Rat, Rat);

#[derive(Clone, Debug, PartialEq)]
pub struct EpsPoly {
    pub lo: i64,
    /// coefficient pairs of eps^(lo + i); no zero pairs at either end.
    pub c: Vec<Pair>,
}

impl EpsPoly {
    fn normalized(mut self) -> Self {
        while let Some((a, b)) = self.c.last() {
            if a.is_zero() && b.is_zero() {
                self.c.pop();
            } else {
                break;
            }
        }
        while let Some((a, b)) = self.c.first() {
            if a.is_zero() && b.is_zero() {
                self.c.remove(0);
                self.lo += 1;
            } else {
                break;
            }
        }
        if self.c.is_empty() {
            self.lo = 0;
        }
        self
    }

    pub fn is_monomial(&self) -> bool {
        self.c.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsPairs {
    /// s^2 = sq.
    pub sq: Rat,
}

impl EpsPairs {
    pub fn new(sq: Rat) -> Self {
        EpsPairs { sq }
    }

    pub fn eps(&self) -> EpsPoly {
        EpsPoly {
            lo: 1,
            c: vec![(Rat::one(), Rat::zero())],
        }
    }

    pub fn gen_s(&self) -> EpsPoly {
        EpsPoly {
            lo: 0,
            c: vec![(Rat::zero(), Rat::one())],
        }
    }

    pub fn monomial(&self, a: Rat, b: Rat, k: i64) -> EpsPoly {
        EpsPoly { lo: k, c: vec![(a, b)] }.normalized()
    }

    fn pair_mul(&self, x: &Pair, y: &Pair) -> Pair {
        // (a + bs)(c + ds) = ac + bd sq + (ad + bc) s
        (
            &x.0 * &y.0 + &x.1 * &y.1 * &self.sq,
            &x.0 * &y.1 + &x.1 * &y.0,
        )
    }

    /// Convert from the general number-field-over-rational-functions
    /// representation; requires every denominator to be a parameter power.
    pub fn from_nf(&self, nf: &NumberField<RatFuncs>, e: &[RatFunc]) -> Result<EpsPoly> {
        if e.len() > 2 {
            return Err(Error::domain("expected a quadratic extension element"));
        }
        let _ = nf;
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        let comp = |f: &RatFunc| -> Result<(i64, Vec<Rat>)> {
            // f = num(eps) / (eps^k) with monic monomial denominator
            let k = f.den.len() as i64 - 1;
            if f.den[..f.den.len() - 1].iter().any(|c| !c.is_zero())
                || !f.den[f.den.len() - 1].is_one()
            {
                return Err(Error::domain(
                    "denominator is not a parameter power; cannot convert",
                ));
            }
            Ok((-k, f.num.clone()))
        };
        let zero_part = (0i64, vec![]);
        let p0 = e.first().map(comp).transpose()?.unwrap_or(zero_part.clone());
        let p1 = e.get(1).map(comp).transpose()?.unwrap_or(zero_part);
        for (off, v) in [(&p0, 0), (&p1, 1)].iter().map(|(p, i)| (p.0, (*i, &p.1))) {
            if !v.1.is_empty() {
                lo = lo.min(off);
                hi = hi.max(off + v.1.len() as i64 - 1);
            }
        }
        if lo > hi {
            return Ok(self.zero());
        }
        let mut c = vec![(Rat::zero(), Rat::zero()); (hi - lo + 1) as usize];
        for (i, r) in p0.1.iter().enumerate() {
            c[(p0.0 + i as i64 - lo) as usize].0 = r.clone();
        }
        for (i, r) in p1.1.iter().enumerate() {
            c[(p1.0 + i as i64 - lo) as usize].1 = r.clone();
        }
        Ok(EpsPoly { lo, c }.normalized())
    }

    /// Convert back into the general representation.
    pub fn to_nf(&self, nf: &NumberField<RatFuncs>, e: &EpsPoly) -> Vec<RatFunc> {
        let base = &nf.base;
        let mut c0 = base.zero();
        let mut c1 = base.zero();
        for (i, (a, b)) in e.c.iter().enumerate() {
            let k = e.lo + i as i64;
            let mono = |r: &Rat| -> RatFunc {
                if r.is_zero() {
                    return base.zero();
                }
                if k >= 0 {
                    let mut num = vec![Rat::zero(); k as usize + 1];
                    num[k as usize] = r.clone();
                    RatFunc {
                        num,
                        den: vec![Rat::one()],
                    }
                } else {
                    let mut den = vec![Rat::zero(); (-k) as usize + 1];
                    den[(-k) as usize] = Rat::one();
                    RatFunc {
                        num: vec![r.clone()],
                        den,
                    }
                }
            };
            c0 = base.add(&c0, &mono(a));
            c1 = base.add(&c1, &mono(b));
        }
        crate::scalar::poly::normalize(base, vec![c0, c1])
    }
}

impl Domain for EpsPairs {
    type Elem = EpsPoly;

    fn zero(&self) -> EpsPoly {
        EpsPoly { lo: 0, c: vec![] }
    }

    fn one(&self) -> EpsPoly {
        EpsPoly {
            lo: 0,
            c: vec![(Rat::one(), Rat::zero())],
        }
    }

    fn is_zero(&self, a: &EpsPoly) -> bool {
        a.c.is_empty()
    }

    fn add(&self, a: &EpsPoly, b: &EpsPoly) -> EpsPoly {
        if a.c.is_empty() {
            return b.clone();
        }
        if b.c.is_empty() {
            return a.clone();
        }
        let lo = a.lo.min(b.lo);
        let hi = (a.lo + a.c.len() as i64 - 1).max(b.lo + b.c.len() as i64 - 1);
        let mut c = vec![(Rat::zero(), Rat::zero()); (hi - lo + 1) as usize];
        for (i, p) in a.c.iter().enumerate() {
            let j = (a.lo + i as i64 - lo) as usize;
            c[j].0 += &p.0;
            c[j].1 += &p.1;
        }
        for (i, p) in b.c.iter().enumerate() {
            let j = (b.lo + i as i64 - lo) as usize;
            c[j].0 += &p.0;
            c[j].1 += &p.1;
        }
        EpsPoly { lo, c }.normalized()
    }

    fn sub(&self, a: &EpsPoly, b: &EpsPoly) -> EpsPoly {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &EpsPoly) -> EpsPoly {
        EpsPoly {
            lo: a.lo,
            c: a.c.iter().map(|(x, y)| (-x, -y)).collect(),
        }
    }

    fn mul(&self, a: &EpsPoly, b: &EpsPoly) -> EpsPoly {
        if a.c.is_empty() || b.c.is_empty() {
            return self.zero();
        }
        let mut c = vec![(Rat::zero(), Rat::zero()); a.c.len() + b.c.len() - 1];
        for (i, x) in a.c.iter().enumerate() {
            if x.0.is_zero() && x.1.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                let p = self.pair_mul(x, y);
                c[i + j].0 += p.0;
                c[i + j].1 += p.1;
            }
        }
        EpsPoly { lo: a.lo + b.lo, c }.normalized()
    }

    fn inv(&self, a: &EpsPoly) -> Result<EpsPoly> {
        if a.c.is_empty() {
            return Err(Error::DivisionByZero("eps-pair domain".into()));
        }
        if !a.is_monomial() {
            return Err(Error::domain(
                "inverse of a non-monomial Laurent element is not Laurent",
            ));
        }
        let (x, y) = &a.c[0];
        // (a + bs)^{-1} = (a - bs)/(a^2 - sq b^2)
        let n = x * x - &(y * y * &self.sq);
        if n.is_zero() {
            return Err(Error::DivisionByZero("eps-pair norm".into()));
        }
        let ni = n.recip();
        Ok(EpsPoly {
            lo: -a.lo,
            c: vec![(x * &ni, -(y * &ni))],
        })
    }

    fn d_param(&self, a: &EpsPoly) -> Option<EpsPoly> {
        let mut c = Vec::with_capacity(a.c.len());
        for (i, (x, y)) in a.c.iter().enumerate() {
            let k = Rat::from(num_bigint::BigInt::from(a.lo + i as i64));
            c.push((x * &k, y * &k));
        }
        Some(
            EpsPoly {
                lo: a.lo - 1,
                c,
            }
            .normalized(),
        )
    }

    fn from_rat(&self, r: &Rat) -> EpsPoly {
        if r.is_zero() {
            return self.zero();
        }
        EpsPoly {
            lo: 0,
            c: vec![(r.clone(), Rat::zero())],
        }
    }

    fn fmt_elem(&self, a: &EpsPoly) -> String {
        if a.c.is_empty() {
            return "0".into();
        }
        let mut parts = vec![];
        for (i, (x, y)) in a.c.iter().enumerate() {
            let k = a.lo + i as i64;
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let head = if x.is_zero() {
                format!("({y})*s")
            } else if y.is_zero() {
                format!("{x}")
            } else {
                format!("({x} + ({y})*s)")
            };
            parts.push(match k {
                0 => head,
                1 => format!("{head}*eps"),
                _ => format!("{head}*eps^{k}"),
            });
        }
        parts.join(" + ")
    }

    fn elem_to_json(&self, a: &EpsPoly) -> serde_json::Value {
        serde_json::json!({
            "gen": "s",
            "eps_lo": a.lo,
            "pairs": a.c.iter().map(|(x, y)| serde_json::json!([
                {"num": x.numer().to_string(), "den": x.denom().to_string()},
                {"num": y.numer().to_string(), "den": y.denom().to_string()},
            ])).collect::<Vec<_>>(),
        })
    }

    fn elem_from_json(&self, v: &serde_json::Value) -> Result<EpsPoly> {
        let lo = v
            .get("eps_lo")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::config("eps-pair scalar needs eps_lo"))?;
        let arr = v
            .get("pairs")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::config("eps-pair scalar needs pairs"))?;
        let q = super::Rationals;
        let mut c = vec![];
        for pair in arr {
            let p = pair
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::config("each pair must be [rat, rat]"))?;
            c.push((q.elem_from_json(&p[0])?, q.elem_from_json(&p[1])?));
        }
        Ok(EpsPoly { lo, c }.normalized())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn qr(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn ring_and_conversion_roundtrip() {
        let dom = EpsPairs::new(qr(-2, 1));
        let base = RatFuncs::new("eps");
        let nf = NumberField::new(
            base.clone(),
            "s",
            vec![base.from_i64(2), base.zero(), base.one()],
        )
        .unwrap();
        let s = dom.gen_s();
        assert_eq!(dom.mul(&s, &s), dom.from_i64(-2));
        // (eps + s)(eps - s) = eps^2 + 2
        let e = dom.eps();
        let a = dom.add(&e, &s);
        let b = dom.sub(&e, &s);
        let prod = dom.mul(&a, &b);
        let want = dom.add(&dom.mul(&e, &e), &dom.from_i64(2));
        assert_eq!(prod, want);
        // inverse of a monomial
        let m = dom.monomial(qr(3, 1), qr(1, 2), -2);
        let mi = dom.inv(&m).unwrap();
        assert_eq!(dom.mul(&m, &mi), dom.one());
        // roundtrip through the general representation
        let x = dom.add(&dom.monomial(qr(7, 3), qr(-1, 4), -2), &dom.monomial(qr(1, 1), qr(2, 1), 3));
        let nf_x = dom.to_nf(&nf, &x);
        let back = dom.from_nf(&nf, &nf_x).unwrap();
        assert_eq!(back, x);
    }
}
