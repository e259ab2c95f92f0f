//! Polynomials in the doubled time variables graded by an auxiliary
//! spectral-parameter power: the carrier for vertex-operator computations.
//!
//! Variable ids: q_k -> k, q'_k -> QP_OFFSET + k. Weight bookkeeping for the
//! trust audit uses the time index k in both families.

use std::collections::BTreeMap;
use trtau_core::scalar::{Caps, Domain, Mono, MultiPoly};

pub const QP_OFFSET: u32 = 1 << 16;

pub fn q_var(k: u32) -> u32 {
    k
}

pub fn qp_var(k: u32) -> u32 {
    QP_OFFSET + k
}

/// Weighted degree of the q' part (sum of time indices).
pub fn qp_weight(m: &Mono) -> u64 {
    m.0.iter()
        .filter(|&&(v, _)| v >= QP_OFFSET)
        .map(|&(v, e)| ((v - QP_OFFSET) as u64) * e as u64)
        .sum()
}

/// Largest time index appearing in either family.
pub fn max_time_index(m: &Mono) -> u32 {
    m.0.iter()
        .map(|&(v, _)| if v >= QP_OFFSET { v - QP_OFFSET } else { v })
        .max()
        .unwrap_or(0)
}

/// Caps for the doubled computation.
#[derive(Clone, Copy, Debug)]
pub struct LamCaps {
    pub caps: Caps,
    /// Spectral-parameter window [lam_lo, lam_hi].
    pub lam_lo: i64,
    pub lam_hi: i64,
    /// Prune monomials whose q'-weight exceeds this.
    pub qp_weight_max: u64,
}

/// A polynomial in (q, q') with coefficients graded by the lambda power.
#[derive(Clone, Debug)]
pub struct LamPoly<D: Domain> {
    pub dom: D,
    pub caps: LamCaps,
    pub slices: BTreeMap<i64, MultiPoly<D>>,
}

impl<D: Domain> LamPoly<D> {
    pub fn zero(dom: D, caps: LamCaps) -> Self {
        LamPoly {
            dom,
            caps,
            slices: BTreeMap::new(),
        }
    }

    pub fn one(dom: D, caps: LamCaps) -> Self {
        let mut p = LamPoly::zero(dom.clone(), caps);
        p.add_term(0, 0, Mono::one(), dom.one());
        p
    }

    pub fn within(&self, lam: i64, h: u32, m: &Mono) -> bool {
        lam >= self.caps.lam_lo
            && lam <= self.caps.lam_hi
            && h <= self.caps.caps.max_hbar
            && m.degree() <= self.caps.caps.max_degree
            && qp_weight(m) <= self.caps.qp_weight_max
    }

    pub fn add_term(&mut self, lam: i64, h: u32, m: Mono, c: D::Elem) {
        if self.dom.is_zero(&c) || !self.within(lam, h, &m) {
            return;
        }
        let caps = self.caps.caps;
        let dom = self.dom.clone();
        let slice = self
            .slices
            .entry(lam)
            .or_insert_with(|| MultiPoly::zero(dom, caps));
        slice.add_term(h, m, c);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (lam, poly) in other.slices.iter() {
            for ((h, m), c) in poly.terms.iter() {
                out.add_term(*lam, *h, m.clone(), c.clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &D::Elem) -> Self {
        let mut out = LamPoly::zero(self.dom.clone(), self.caps);
        for (lam, poly) in self.slices.iter() {
            for ((h, m), c) in poly.terms.iter() {
                out.add_term(*lam, *h, m.clone(), self.dom.mul(c, s));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LamPoly::zero(self.dom.clone(), self.caps);
        for (l1, p1) in self.slices.iter() {
            for (l2, p2) in other.slices.iter() {
                let lam = l1 + l2;
                if lam < self.caps.lam_lo || lam > self.caps.lam_hi {
                    continue;
                }
                let prod = p1.mul(p2);
                if prod.terms.is_empty() {
                    continue;
                }
                match out.slices.entry(lam) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let merged = e.get().add(&prod);
                        *e.get_mut() = merged;
                    }
                }
            }
        }
        // re-apply the q'-weight prune if one is set
        if self.caps.qp_weight_max != u64::MAX {
            for p in out.slices.values_mut() {
                p.terms.retain(|(_, m), _| qp_weight(m) <= self.caps.qp_weight_max);
            }
        }
        out
    }

    /// exp of a term with no (lam=0, hbar=0, constant) part; terminates on
    /// the caps (every term must raise hbar, degree or |lambda|).
    pub fn exp(&self) -> Self {
        let dom = &self.dom;
        let mut acc = LamPoly::one(dom.clone(), self.caps);
        let mut pw = LamPoly::one(dom.clone(), self.caps);
        let bound = self.caps.caps.max_hbar as i64
            + self.caps.caps.max_degree as i64
            + (self.caps.lam_hi - self.caps.lam_lo).abs()
            + 2;
        let mut factorial = dom.one();
        for k in 1..=bound {
            pw = pw.mul(self);
            if pw.is_zero() {
                break;
            }
            factorial = dom.mul(&factorial, &dom.from_i64(k));
            let inv = dom.inv(&factorial).expect("factorial invertible");
            acc = acc.add(&pw.scale(&inv));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.slices.values().all(|p| p.terms.is_empty())
    }

    pub fn slice(&self, lam: i64) -> Option<&MultiPoly<D>> {
        self.slices.get(&lam)
    }

    pub fn term_count(&self) -> usize {
        self.slices.values().map(|p| p.terms.len()).sum()
    }
}
