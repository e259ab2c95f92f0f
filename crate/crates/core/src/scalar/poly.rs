//! Dense univariate polynomials over an arbitrary domain.
//!
//! Coefficients are stored low degree -> high degree with no trailing zeros
//! (the zero polynomial is the empty vector). These are the workhorse for
//! rational-function fields, number-field quotients and rational curve data.

use super::Domain;
use crate::error::{Error, Result};

pub fn normalize<D: Domain>(dom: &D, mut v: Vec<D::Elem>) -> Vec<D::Elem> {
    while let Some(c) = v.last() {
        if dom.is_zero(c) {
            v.pop();
        } else {
            break;
        }
    }
    v
}

pub fn deg<D: Domain>(p: &[D::Elem]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn is_zero<D: Domain>(p: &[D::Elem]) -> bool {
    p.is_empty()
}

pub fn constant<D: Domain>(dom: &D, c: D::Elem) -> Vec<D::Elem> {
    normalize(dom, vec![c])
}

pub fn add<D: Domain>(dom: &D, a: &[D::Elem], b: &[D::Elem]) -> Vec<D::Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| dom.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| dom.zero());
        out.push(dom.add(&x, &y));
    }
    normalize(dom, out)
}

pub fn sub<D: Domain>(dom: &D, a: &[D::Elem], b: &[D::Elem]) -> Vec<D::Elem> {
    add(dom, a, &neg(dom, b))
}

pub fn neg<D: Domain>(dom: &D, a: &[D::Elem]) -> Vec<D::Elem> {
    a.iter().map(|c| dom.neg(c)).collect()
}

pub fn scale<D: Domain>(dom: &D, a: &[D::Elem], s: &D::Elem) -> Vec<D::Elem> {
    normalize(dom, a.iter().map(|c| dom.mul(c, s)).collect())
}

pub fn mul<D: Domain>(dom: &D, a: &[D::Elem], b: &[D::Elem]) -> Vec<D::Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![dom.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if dom.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = dom.add(&out[i + j], &dom.mul(x, y));
        }
    }
    normalize(dom, out)
}

/// Euclidean division a = q b + r with deg r < deg b. Requires the leading
/// coefficient of b to be invertible.
pub fn div_rem<D: Domain>(
    dom: &D,
    a: &[D::Elem],
    b: &[D::Elem],
) -> Result<(Vec<D::Elem>, Vec<D::Elem>)> {
    if b.is_empty() {
        return Err(Error::DivisionByZero("polynomial division".into()));
    }
    let lead_inv = dom.inv(b.last().unwrap())?;
    let db = b.len() - 1;
    let mut r: Vec<D::Elem> = a.to_vec();
    let mut q = vec![dom.zero(); a.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = dom.mul(r.last().unwrap(), &lead_inv);
        let shift = dr - db;
        q[shift] = dom.add(&q[shift], &c);
        for i in 0..=db {
            let t = dom.mul(&b[i], &c);
            r[shift + i] = dom.sub(&r[shift + i], &t);
        }
        r = normalize(dom, r);
        if r.len() <= db {
            break;
        }
    }
    Ok((normalize(dom, q), r))
}

/// Monic gcd via Euclid's algorithm (domain must be a field).
pub fn gcd<D: Domain>(dom: &D, a: &[D::Elem], b: &[D::Elem]) -> Result<Vec<D::Elem>> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = div_rem(dom, &x, &y)?;
        x = y;
        y = r;
    }
    if x.is_empty() {
        return Ok(x);
    }
    let li = dom.inv(x.last().unwrap())?;
    Ok(scale(dom, &x, &li))
}

/// Extended Euclid: returns (g, s, t) with s a + t b = g, g monic.
pub fn ext_gcd<D: Domain>(
    dom: &D,
    a: &[D::Elem],
    b: &[D::Elem],
) -> Result<(Vec<D::Elem>, Vec<D::Elem>, Vec<D::Elem>)> {
    let one = constant(dom, dom.one());
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut s0 = one.clone();
    let mut s1: Vec<D::Elem> = vec![];
    let mut t0: Vec<D::Elem> = vec![];
    let mut t1 = one;
    while !r1.is_empty() {
        let (q, r) = div_rem(dom, &r0, &r1)?;
        let s = sub(dom, &s0, &mul(dom, &q, &s1));
        let t = sub(dom, &t0, &mul(dom, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_empty() {
        return Ok((r0, s0, t0));
    }
    let li = dom.inv(r0.last().unwrap())?;
    Ok((
        scale(dom, &r0, &li),
        scale(dom, &s0, &li),
        scale(dom, &t0, &li),
    ))
}

pub fn derivative<D: Domain>(dom: &D, a: &[D::Elem]) -> Vec<D::Elem> {
    if a.len() <= 1 {
        return vec![];
    }
    let mut out = Vec::with_capacity(a.len() - 1);
    for (i, c) in a.iter().enumerate().skip(1) {
        out.push(dom.mul(c, &dom.from_i64(i as i64)));
    }
    normalize(dom, out)
}

pub fn eval<D: Domain>(dom: &D, a: &[D::Elem], x: &D::Elem) -> D::Elem {
    let mut acc = dom.zero();
    for c in a.iter().rev() {
        acc = dom.add(&dom.mul(&acc, x), c);
    }
    acc
}

/// Coefficients of a(z + c) (Taylor shift).
pub fn taylor_shift<D: Domain>(dom: &D, a: &[D::Elem], c: &D::Elem) -> Vec<D::Elem> {
    // Horner on (z + c): repeatedly multiply accumulator by (z + c).
    let mut out: Vec<D::Elem> = vec![];
    for coeff in a.iter().rev() {
        // out = out * (z + c) + coeff
        let mut next = vec![dom.zero(); out.len() + 1];
        for (i, v) in out.iter().enumerate() {
            next[i + 1] = dom.add(&next[i + 1], v);
            next[i] = dom.add(&next[i], &dom.mul(v, c));
        }
        next[0] = dom.add(&next[0], coeff);
        out = next;
    }
    normalize(dom, out)
}
