//! Sparse multivariate polynomials with truncation caps.
//!
//! Variables are identified by integer ids whose meaning is assigned by the
//! caller (time variables p_k, doubled Hirota variables, ...). The grading
//! variable hbar is kept as a separate exponent so generating series stay
//! cheap to filter by genus expansion order. Caps are mandatory metadata:
//! multiplication drops monomials beyond the caps, and the caps travel with
//! the value.

use super::Domain;
use std::collections::BTreeMap;

/// A monomial in the p-type variables: sorted (var id, exponent) pairs,
/// exponents > 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(pub Vec<(u32, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(vec![])
    }

    pub fn var(id: u32) -> Self {
        Mono(vec![(id, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(u32, u32)> = vec![];
        for (v, e) in pairs {
            if let Some(last) = out.last_mut() {
                if last.0 == v {
                    last.1 += e;
                    continue;
                }
            }
            out.push((v, e));
        }
        Mono(out)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut pairs = self.0.clone();
        pairs.extend_from_slice(&other.0);
        Mono::from_pairs(pairs)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Sum of var-id * exponent; with ids chosen as time indices this is the
    /// weighted degree used by the trust accounting.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&(v, e)| v as u64 * e as u64).sum()
    }

    pub fn exponent_of(&self, id: u32) -> u32 {
        self.0
            .iter()
            .find(|&&(v, _)| v == id)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Divide by var^1; None if the variable is absent.
    pub fn div_var(&self, id: u32) -> Option<Mono> {
        let mut pairs = self.0.clone();
        let pos = pairs.iter().position(|&(v, _)| v == id)?;
        if pairs[pos].1 == 1 {
            pairs.remove(pos);
        } else {
            pairs[pos].1 -= 1;
        }
        Some(Mono(pairs))
    }
}

/// Truncation caps; `None` means unbounded in that direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_hbar: u32,
    pub max_degree: u32,
}

impl Caps {
    pub fn min(self, other: Caps) -> Caps {
        Caps {
            max_hbar: self.max_hbar.min(other.max_hbar),
            max_degree: self.max_degree.min(other.max_degree),
        }
    }
}

/// Key: (hbar exponent, monomial).
pub type Key = (u32, Mono);

#[derive(Clone, Debug)]
pub struct MultiPoly<D: Domain> {
    pub dom: D,
    pub caps: Caps,
    pub terms: BTreeMap<Key, D::Elem>,
}

impl<D: Domain> MultiPoly<D> {
    pub fn zero(dom: D, caps: Caps) -> Self {
        MultiPoly {
            dom,
            caps,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dom: D, caps: Caps) -> Self {
        let mut p = MultiPoly::zero(dom, caps);
        let one = p.dom.one();
        p.add_term(0, Mono::one(), one);
        p
    }

    pub fn within_caps(&self, h: u32, m: &Mono) -> bool {
        h <= self.caps.max_hbar && m.degree() <= self.caps.max_degree
    }

    pub fn add_term(&mut self, h: u32, m: Mono, c: D::Elem) {
        if self.dom.is_zero(&c) || !self.within_caps(h, &m) {
            return;
        }
        let dom = self.dom.clone();
        let e = self.terms.entry((h, m));
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = dom.add(o.get(), &c);
                if dom.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, h: u32, m: &Mono) -> D::Elem {
        self.terms
            .get(&(h, m.clone()))
            .cloned()
            .unwrap_or_else(|| self.dom.zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = MultiPoly::zero(self.dom.clone(), self.caps.min(other.caps));
        for ((h, m), c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*h, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for (_, c) in out.terms.iter_mut() {
            *c = self.dom.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &D::Elem) -> Self {
        let mut out = MultiPoly::zero(self.dom.clone(), self.caps);
        for ((h, m), c) in self.terms.iter() {
            out.add_term(*h, m.clone(), self.dom.mul(c, s));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let caps = self.caps.min(other.caps);
        let mut out = MultiPoly::zero(self.dom.clone(), caps);
        // bucket the right factor by (hbar, degree) so cap-incompatible
        // pairs are skipped wholesale
        let mut buckets: BTreeMap<(u32, u32), Vec<(&Mono, &D::Elem)>> = BTreeMap::new();
        for ((h2, m2), c2) in other.terms.iter() {
            buckets.entry((*h2, m2.degree())).or_default().push((m2, c2));
        }
        for ((h1, m1), c1) in self.terms.iter() {
            let d1 = m1.degree();
            if *h1 > caps.max_hbar || d1 > caps.max_degree {
                continue;
            }
            for ((h2, d2), items) in buckets.range(..) {
                if h1 + h2 > caps.max_hbar || d1 + d2 > caps.max_degree {
                    continue;
                }
                for (m2, c2) in items {
                    out.add_term(h1 + h2, m1.mul(m2), self.dom.mul(c1, c2));
                }
            }
        }
        out
    }

    /// exp of a polynomial with no constant term (in the graded sense: every
    /// term must raise hbar-degree or p-degree so the sum terminates).
    pub fn exp(&self) -> Self {
        debug_assert!(
            !self.terms.contains_key(&(0, Mono::one())),
            "exp needs a vanishing constant term"
        );
        let mut acc = MultiPoly::one(self.dom.clone(), self.caps);
        let mut pow = MultiPoly::one(self.dom.clone(), self.caps);
        let order_bound = (self.caps.max_hbar + self.caps.max_degree + 1) as i64;
        let mut k = 1i64;
        let mut factorial = self.dom.one();
        loop {
            pow = pow.mul(self);
            if pow.terms.is_empty() || k > order_bound {
                break;
            }
            factorial = self.dom.mul(&factorial, &self.dom.from_i64(k));
            let inv = self
                .dom
                .inv(&factorial)
                .expect("factorial nonzero in a field");
            acc = acc.add(&pow.scale(&inv));
            k += 1;
        }
        acc
    }

    /// k * d/d(var k) where the variable's "time weight" multiplier is
    /// supplied by the caller per id.
    pub fn derivative_var(&self, id: u32) -> Self {
        let mut out = MultiPoly::zero(self.dom.clone(), self.caps);
        for ((h, m), c) in self.terms.iter() {
            let e = m.exponent_of(id);
            if e == 0 {
                continue;
            }
            let m2 = m.div_var(id).unwrap();
            out.add_term(*h, m2, self.dom.mul(c, &self.dom.from_i64(e as i64)));
        }
        out
    }

    /// Substitute each variable id by a (possibly different-id) linear image:
    /// var -> sum_j coeff_j * var'_j. Used for the Hirota doubling.
    pub fn substitute_linear(
        &self,
        caps: Caps,
        image: &dyn Fn(u32) -> Vec<(u32, D::Elem)>,
    ) -> Self {
        let mut out = MultiPoly::zero(self.dom.clone(), caps);
        for ((h, m), c) in self.terms.iter() {
            // expand the product over variables
            let mut expansion: Vec<(Mono, D::Elem)> = vec![(Mono::one(), c.clone())];
            for &(v, e) in m.0.iter() {
                let img = image(v);
                for _ in 0..e {
                    let mut next: Vec<(Mono, D::Elem)> = vec![];
                    for (mon, coef) in expansion.iter() {
                        for (v2, c2) in img.iter() {
                            let m2 = mon.mul(&Mono::var(*v2));
                            if m2.degree() > caps.max_degree {
                                continue;
                            }
                            next.push((m2, self.dom.mul(coef, c2)));
                        }
                    }
                    expansion = next;
                }
            }
            for (mon, coef) in expansion {
                out.add_term(*h, mon, coef);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
