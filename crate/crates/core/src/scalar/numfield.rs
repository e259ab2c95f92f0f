//! Number-field quotients B[s]/(m(s)) over a base field B.
//!
//! Elements are coefficient vectors of degree < deg(m). The modulus must be
//! monic of degree >= 2 over the base; inversion goes through the extended
//! Euclidean algorithm, so the base must be a field.

use super::poly;
use super::Domain;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct NumberField<B: Domain> {
    pub base: B,
    pub gen_name: String,
    /// Monic modulus, low -> high, length deg + 1.
    pub modulus: Vec<B::Elem>,
}

impl<B: Domain> NumberField<B> {
    pub fn new(base: B, gen_name: impl Into<String>, modulus: Vec<B::Elem>) -> Result<Self> {
        let modulus = poly::normalize(&base, modulus);
        let deg = poly::deg::<B>(&modulus)
            .ok_or_else(|| Error::config("number-field modulus must be nonzero"))?;
        if deg < 2 {
            return Err(Error::config("number-field modulus must have degree >= 2"));
        }
        if modulus.last().map(|c| c != &base.one()).unwrap_or(true) {
            return Err(Error::config("number-field modulus must be monic"));
        }
        Ok(NumberField {
            base,
            gen_name: gen_name.into(),
            modulus,
        })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// The generator s as an element.
    pub fn gen(&self) -> Vec<B::Elem> {
        vec![self.base.zero(), self.base.one()]
    }

    /// Lift a base element.
    pub fn from_base(&self, c: B::Elem) -> Vec<B::Elem> {
        poly::constant(&self.base, c)
    }

    fn reduce(&self, p: Vec<B::Elem>) -> Vec<B::Elem> {
        let (_, r) = poly::div_rem(&self.base, &p, &self.modulus)
            .expect("monic modulus division cannot fail");
        r
    }
}

impl<B: Domain> Domain for NumberField<B> {
    /// Polynomial in the generator, degree < deg(modulus), no trailing zeros.
    type Elem = Vec<B::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![]
    }
    fn one(&self) -> Self::Elem {
        vec![self.base.one()]
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        poly::add(&self.base, a, b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        poly::sub(&self.base, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        poly::neg(&self.base, a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(poly::mul(&self.base, a, b))
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if a.is_empty() {
            return Err(Error::DivisionByZero(format!(
                "number field ({})",
                self.gen_name
            )));
        }
        let (g, s, _) = poly::ext_gcd(&self.base, a, &self.modulus)?;
        if poly::deg::<B>(&g) != Some(0) {
            return Err(Error::domain(format!(
                "element not invertible: gcd with modulus has degree {:?} (modulus not irreducible over base?)",
                poly::deg::<B>(&g)
            )));
        }
        let gi = self.base.inv(&g[0])?;
        Ok(self.reduce(poly::scale(&self.base, &s, &gi)))
    }

    fn from_rat(&self, r: &super::Rat) -> Self::Elem {
        self.from_base(self.base.from_rat(r))
    }

    fn d_param(&self, a: &Self::Elem) -> Option<Self::Elem> {
        // Valid when the modulus has parameter-free coefficients (all our
        // moduli are s^2 + c with c rational); then d/d(param) acts
        // coefficientwise.
        let mut out = Vec::with_capacity(a.len());
        for c in a {
            out.push(self.base.d_param(c)?);
        }
        Some(poly::normalize(&self.base, out))
    }

    fn fmt_elem(&self, a: &Self::Elem) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let mut parts = vec![];
        for (i, c) in a.iter().enumerate() {
            if self.base.is_zero(c) {
                continue;
            }
            let cs = self.base.fmt_elem(c);
            let term = match i {
                0 => cs,
                1 => format!("({})*{}", cs, self.gen_name),
                _ => format!("({})*{}^{}", cs, self.gen_name, i),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }

    fn elem_to_json(&self, a: &Self::Elem) -> serde_json::Value {
        serde_json::json!({
            "gen": self.gen_name,
            "coeffs": a.iter().map(|c| self.base.elem_to_json(c)).collect::<Vec<_>>(),
        })
    }

    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Self::Elem> {
        let arr = v
            .get("coeffs")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::config("number-field scalar needs \"coeffs\" array"))?;
        if arr.len() > self.degree() {
            return Err(Error::config("number-field element exceeds field degree"));
        }
        let coeffs: Result<Vec<B::Elem>> =
            arr.iter().map(|c| self.base.elem_from_json(c)).collect();
        Ok(poly::normalize(&self.base, coeffs?))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Domain, Rat, RatFunc, RatFuncs};
    use super::*;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};

    /// Q(eps)[s]/(s^2+2): the exact domain housing sqrt(-2) over Q(eps).
    fn bessel_domain() -> NumberField<RatFuncs> {
        let base = RatFuncs::new("eps");
        let modulus = vec![base.from_i64(2), base.zero(), base.one()];
        NumberField::new(base, "s", modulus).unwrap()
    }

    fn random_elem(
        dom: &NumberField<RatFuncs>,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Vec<RatFunc> {
        let base = &dom.base;
        let mut coeff = || {
            let num: Vec<Rat> = (0..rng.gen_range(1..3))
                .map(|_| Rat::new(BigInt::from(rng.gen_range(-9i64..9)), BigInt::from(1)))
                .collect();
            let mut den: Vec<Rat> = (0..rng.gen_range(1..3))
                .map(|_| Rat::new(BigInt::from(rng.gen_range(-4i64..5)), BigInt::from(1)))
                .collect();
            if den.iter().all(|c| c == &Rat::from(BigInt::from(0))) {
                den = vec![Rat::from(BigInt::from(1))];
            }
            let f = RatFunc { num, den };
            // reduce through the domain API
            base.add(&f, &base.zero())
        };
        vec![coeff(), coeff()]
    }

    #[test]
    fn generator_squares_to_minus_two() {
        let dom = bessel_domain();
        let s = dom.gen();
        let s2 = dom.mul(&s, &s);
        assert_eq!(s2, dom.from_i64(-2));
    }

    #[test]
    fn field_axioms_sampled() {
        let dom = bessel_domain();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..25 {
            let a = random_elem(&dom, &mut rng);
            let b = random_elem(&dom, &mut rng);
            // (a+b)-b = a
            assert_eq!(dom.sub(&dom.add(&a, &b), &b), a);
            if !dom.is_zero(&b) {
                // (a*b)/b = a
                let ab = dom.mul(&a, &b);
                assert_eq!(dom.div(&ab, &b).unwrap(), a);
            }
            // distributivity
            let c = random_elem(&dom, &mut rng);
            let lhs = dom.mul(&a, &dom.add(&b, &c));
            let rhs = dom.add(&dom.mul(&a, &b), &dom.mul(&a, &c));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn inverse_of_mixed_element() {
        // (eps + s)^{-1} * (eps + s) = 1
        let dom = bessel_domain();
        let base = dom.base.clone();
        let a = vec![base.gen(), base.one()];
        let inv = dom.inv(&a).unwrap();
        assert_eq!(dom.mul(&a, &inv), dom.one());
    }

    #[test]
    fn modulus_must_be_monic_and_quadratic() {
        let base = RatFuncs::new("eps");
        assert!(NumberField::new(base.clone(), "s", vec![base.one(), base.one()]).is_err());
        let m = vec![base.from_i64(2), base.zero(), base.from_i64(3)];
        assert!(NumberField::new(base, "s", m).is_err());
    }

    #[test]
    fn param_derivative_descends_to_coefficients() {
        let dom = bessel_domain();
        let base = dom.base.clone();
        // d/d eps (eps^2 + eps*s) = 2 eps + s
        let e = base.gen();
        let a = vec![base.mul(&e, &e), e.clone()];
        let da = dom.d_param(&a).unwrap();
        assert_eq!(da, vec![base.add(&e, &e), base.one()]);
    }
}
