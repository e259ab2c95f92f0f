//! Rational functions of the global coordinate z over an arbitrary
//! coefficient domain, with local series expansion at finite points and at
//! infinity. These carry the exact global 1-forms on genus-0 curves.

use crate::error::{Error, Result};
use crate::scalar::{poly, Domain, Series};

#[derive(Clone, Debug)]
pub struct RatZ<D: Domain> {
    pub dom: D,
    pub num: Vec<D::Elem>,
    pub den: Vec<D::Elem>,
}

impl<D: Domain> PartialEq for RatZ<D> {
    fn eq(&self, other: &Self) -> bool {
        // cross-multiplied comparison avoids gcd
        let l = poly::mul(&self.dom, &self.num, &other.den);
        let r = poly::mul(&self.dom, &other.num, &self.den);
        l == r
    }
}

impl<D: Domain> RatZ<D> {
    pub fn new(dom: D, num: Vec<D::Elem>, den: Vec<D::Elem>) -> Result<Self> {
        let num = poly::normalize(&dom, num);
        let den = poly::normalize(&dom, den);
        if den.is_empty() {
            return Err(Error::DivisionByZero("rational function of z".into()));
        }
        Ok(RatZ { dom, num, den }.reduced())
    }

    pub fn from_poly(dom: D, num: Vec<D::Elem>) -> Self {
        let num = poly::normalize(&dom, num);
        let den = vec![dom.one()];
        RatZ { dom, num, den }
    }

    pub fn zero(dom: D) -> Self {
        RatZ {
            num: vec![],
            den: vec![dom.one()],
            dom,
        }
    }

    pub fn constant(dom: D, c: D::Elem) -> Self {
        let num = poly::constant(&dom, c);
        RatZ {
            num,
            den: vec![dom.one()],
            dom,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn reduced(self) -> Self {
        let dom = &self.dom;
        if self.num.is_empty() {
            return RatZ {
                dom: self.dom.clone(),
                num: vec![],
                den: vec![self.dom.one()],
            };
        }
        let g = match poly::gcd(dom, &self.num, &self.den) {
            Ok(g) => g,
            Err(_) => return self,
        };
        if poly::deg::<D>(&g) == Some(0) {
            return self;
        }
        let (num, _) = poly::div_rem(dom, &self.num, &g).unwrap();
        let (den, _) = poly::div_rem(dom, &self.den, &g).unwrap();
        RatZ {
            dom: self.dom.clone(),
            num,
            den,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let dom = &self.dom;
        let num = poly::add(
            dom,
            &poly::mul(dom, &self.num, &o.den),
            &poly::mul(dom, &o.num, &self.den),
        );
        let den = poly::mul(dom, &self.den, &o.den);
        RatZ {
            dom: self.dom.clone(),
            num,
            den,
        }
        .reduced()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatZ {
            dom: self.dom.clone(),
            num: poly::neg(&self.dom, &self.num),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatZ {
            dom: self.dom.clone(),
            num: poly::mul(&self.dom, &self.num, &o.num),
            den: poly::mul(&self.dom, &self.den, &o.den),
        }
        .reduced()
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero("rational function of z".into()));
        }
        Ok(RatZ {
            dom: self.dom.clone(),
            num: poly::mul(&self.dom, &self.num, &o.den),
            den: poly::mul(&self.dom, &self.den, &o.num),
        }
        .reduced())
    }

    pub fn scale(&self, s: &D::Elem) -> Self {
        RatZ {
            dom: self.dom.clone(),
            num: poly::scale(&self.dom, &self.num, s),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = RatZ::constant(self.dom.clone(), self.dom.one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// d/dz.
    pub fn derivative(&self) -> Self {
        let dom = &self.dom;
        let num = poly::sub(
            dom,
            &poly::mul(dom, &poly::derivative(dom, &self.num), &self.den),
            &poly::mul(dom, &self.num, &poly::derivative(dom, &self.den)),
        );
        let den = poly::mul(dom, &self.den, &self.den);
        RatZ {
            dom: self.dom.clone(),
            num,
            den,
        }
        .reduced()
    }

    /// Evaluate at a point where the denominator does not vanish.
    pub fn eval(&self, z: &D::Elem) -> Result<D::Elem> {
        let dom = &self.dom;
        let d = poly::eval(dom, &self.den, z);
        if dom.is_zero(&d) {
            return Err(Error::DivisionByZero("evaluation at a pole".into()));
        }
        dom.div(&poly::eval(dom, &self.num, z), &d)
    }

    /// Laurent expansion in w where z = a + w, certified through w^order.
    pub fn expand_at(&self, a: &D::Elem, order: i64) -> Result<Series<D>> {
        let dom = &self.dom;
        if self.is_zero() {
            return Ok(Series::zero(dom.clone(), order));
        }
        // numerator and denominator are exact polynomials, so the padded
        // windows below certify every coefficient through `order`.
        let pad = 2 * (self.num.len() + self.den.len()) as i64 + 6;
        let num = poly::taylor_shift(dom, &self.num, a);
        let den = poly::taylor_shift(dom, &self.den, a);
        let ns = Series::new(dom.clone(), 0, num).extended(order + pad);
        let ds = Series::new(dom.clone(), 0, den).extended(order + pad);
        Ok(ns.mul(&ds.invert()?).truncate(order))
    }

    /// Laurent expansion in w = 1/z at infinity, certified through w^order.
    pub fn expand_at_infinity(&self, order: i64) -> Result<Series<D>> {
        let dom = &self.dom;
        if self.is_zero() {
            return Ok(Series::zero(dom.clone(), order));
        }
        // num(1/w) = w^{-dn} * rev(num)(w); both factors are exact Laurent
        // polynomials, so pad the windows by the degree spread.
        let dn = self.num.len() as i64 - 1;
        let dd = self.den.len() as i64 - 1;
        let pad = 2 * (dn + dd) + 6;
        let rev = |p: &[D::Elem]| -> Vec<D::Elem> { p.iter().rev().cloned().collect() };
        let ns = Series::new(dom.clone(), -dn, rev(&self.num)).extended(order + pad);
        let ds = Series::new(dom.clone(), -dd, rev(&self.den)).extended(order + pad);
        Ok(ns.mul(&ds.invert()?).truncate(order))
    }

    /// Residue of self * dz at the finite point a.
    pub fn residue_at(&self, a: &D::Elem) -> Result<D::Elem> {
        self.expand_at(a, 0)?.residue()
    }

    /// Residue of self * dz at infinity: -[w^1] of the expansion in w = 1/z.
    pub fn residue_at_infinity(&self) -> Result<D::Elem> {
        let s = self.expand_at_infinity(1)?;
        Ok(self.dom.neg(&s.coeff(1)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rat, Rationals};
    use num_bigint::BigInt;

    fn qr(n: i64) -> Rat {
        Rat::from(BigInt::from(n))
    }

    #[test]
    fn expansion_and_residues() {
        // f = 1/(z(z-1)): residues +(-1) at 0 and +1 at 1, -0 at infinity
        let f = RatZ::new(Rationals, vec![qr(1)], vec![qr(0), qr(-1), qr(1)]).unwrap();
        assert_eq!(f.residue_at(&qr(0)).unwrap(), qr(-1));
        assert_eq!(f.residue_at(&qr(1)).unwrap(), qr(1));
        assert_eq!(f.residue_at_infinity().unwrap(), qr(0));
        // sum of all residues of a rational 1-form vanishes
        let g = RatZ::new(Rationals, vec![qr(2), qr(3)], vec![qr(0), qr(0), qr(1)]).unwrap();
        let total = Rationals.add(
            &g.residue_at(&qr(0)).unwrap(),
            &g.residue_at_infinity().unwrap(),
        );
        assert_eq!(total, qr(0));
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dz [z^2/(1+z)] = (z^2 + 2z)/(1+z)^2
        let f = RatZ::new(Rationals, vec![qr(0), qr(0), qr(1)], vec![qr(1), qr(1)]).unwrap();
        let df = f.derivative();
        let want = RatZ::new(
            Rationals,
            vec![qr(0), qr(2), qr(1)],
            vec![qr(1), qr(2), qr(1)],
        )
        .unwrap();
        assert_eq!(df, want);
    }
}
