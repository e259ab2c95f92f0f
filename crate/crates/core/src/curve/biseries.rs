//! Truncated bivariate Taylor series, used for expanding the Bergman kernel
//! at pairs of critical points and at the boundary.
//!
//! Certification is by total degree: coefficients are exact for i + j <= n.
//! Division by (u - v) lowers the certified order by one, which is why the
//! window is tracked this way.

use crate::error::{Error, Result};
use crate::scalar::{Domain, Series};

#[derive(Clone, Debug)]
pub struct BiTaylor<D: Domain> {
    pub dom: D,
    /// Total-degree certification order.
    pub n: usize,
    /// c[i][j] = coefficient of u^i v^j; entries with i + j > n are junk.
    pub c: Vec<Vec<D::Elem>>,
}

impl<D: Domain> BiTaylor<D> {
    pub fn zero(dom: D, n: usize) -> Self {
        let c = vec![vec![dom.zero(); n + 1]; n + 1];
        BiTaylor { dom, n, c }
    }

    pub fn constant(dom: D, n: usize, e: D::Elem) -> Self {
        let mut t = BiTaylor::zero(dom, n);
        t.c[0][0] = e;
        t
    }

    pub fn coeff(&self, i: usize, j: usize) -> Result<D::Elem> {
        if i + j > self.n {
            return Err(Error::truncation(format!(
                "bivariate coefficient ({i},{j}) beyond total-degree window {}",
                self.n
            )));
        }
        Ok(self.c[i][j].clone())
    }

    fn binop(&self, o: &Self, f: impl Fn(&D::Elem, &D::Elem) -> D::Elem) -> Self {
        let n = self.n.min(o.n);
        let mut t = BiTaylor::zero(self.dom.clone(), n);
        for i in 0..=n {
            for j in 0..=(n - i) {
                t.c[i][j] = f(&self.c[i][j], &o.c[i][j]);
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        self.binop(o, |a, b| self.dom.add(a, b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.binop(o, |a, b| self.dom.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        let mut t = self.clone();
        for row in t.c.iter_mut() {
            for e in row.iter_mut() {
                *e = self.dom.neg(e);
            }
        }
        t
    }

    pub fn scale(&self, s: &D::Elem) -> Self {
        let mut t = self.clone();
        for row in t.c.iter_mut() {
            for e in row.iter_mut() {
                *e = self.dom.mul(e, s);
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n.min(o.n);
        let mut t = BiTaylor::zero(self.dom.clone(), n);
        for i1 in 0..=n {
            for j1 in 0..=(n - i1) {
                if self.dom.is_zero(&self.c[i1][j1]) {
                    continue;
                }
                for i2 in 0..=(n - i1 - j1) {
                    for j2 in 0..=(n - i1 - j1 - i2) {
                        let p = self.dom.mul(&self.c[i1][j1], &o.c[i2][j2]);
                        t.c[i1 + i2][j1 + j2] = self.dom.add(&t.c[i1 + i2][j1 + j2], &p);
                    }
                }
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        (0..=self.n).all(|i| (0..=(self.n - i)).all(|j| self.dom.is_zero(&self.c[i][j])))
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn invert(&self) -> Result<Self> {
        let dom = &self.dom;
        let inv0 = dom.inv(&self.c[0][0])?;
        // tail = 1 - self/c00, inverse = (sum tail^k) / c00
        let mut tail = self.scale(&inv0).neg();
        tail.c[0][0] = dom.add(&tail.c[0][0], &dom.one());
        let mut acc = BiTaylor::constant(dom.clone(), self.n, dom.one());
        let mut pw = BiTaylor::constant(dom.clone(), self.n, dom.one());
        for _ in 0..=self.n {
            pw = pw.mul(&tail);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&inv0))
    }

    /// Exact division by (u - v); the certified order drops by one. Errors
    /// if the input is not divisible within the window.
    pub fn div_u_minus_v(&self) -> Result<Self> {
        // f = (u-v) g  =>  f_{i,j} = g_{i-1,j} - g_{i,j-1}
        // so g_{i,j} = f_{i+1,j} + g_{i+1,j-1}, resolving towards j = 0.
        let dom = &self.dom;
        if self.n == 0 {
            return Err(Error::truncation("bivariate window too small to divide"));
        }
        let n = self.n - 1;
        let mut g = BiTaylor::zero(dom.clone(), n);
        for j in 0..=n {
            for i in (0..=(n - j)).rev() {
                let mut v = self.c[i + 1][j].clone();
                if j >= 1 {
                    v = dom.add(&v, &g.c[i + 1][j - 1]);
                }
                g.c[i][j] = v;
            }
        }
        // consistency: f_{0,j} = -g_{0,j-1} and f_{0,0} = 0
        if !dom.is_zero(&self.c[0][0]) {
            return Err(Error::Consistency(
                "bivariate series not divisible by (u - v): nonzero constant".into(),
            ));
        }
        for j in 1..=self.n.min(n + 1) {
            let want = dom.neg(&g.c[0][j - 1]);
            if self.c[0][j] != want {
                return Err(Error::Consistency(format!(
                    "bivariate series not divisible by (u - v) at column {j}"
                )));
            }
        }
        Ok(g)
    }

    /// (s(u) - s(v)) / (u - v) for a Taylor series s; certified to total
    /// degree min(n, s.hi - 1).
    pub fn divided_difference(dom: &D, n: usize, s: &Series<D>) -> Self {
        let n = n.min((s.hi - 1).max(0) as usize);
        let mut t = BiTaylor::zero(dom.clone(), n);
        for m in 1..=(n as i64 + 1) {
            let sm = s.coeff_or_zero(m);
            if dom.is_zero(&sm) {
                continue;
            }
            for i in 0..=(m - 1) {
                let j = m - 1 - i;
                t.c[i as usize][j as usize] = dom.add(&t.c[i as usize][j as usize], &sm);
            }
        }
        t
    }

    /// f(u) as a bivariate object (constant in v); f must be Taylor.
    pub fn from_u_series(dom: &D, n: usize, s: &Series<D>) -> Self {
        let n = n.min(s.hi.max(0) as usize);
        let mut t = BiTaylor::zero(dom.clone(), n);
        for i in 0..=n {
            t.c[i][0] = s.coeff_or_zero(i as i64);
        }
        t
    }

    pub fn from_v_series(dom: &D, n: usize, s: &Series<D>) -> Self {
        let n = n.min(s.hi.max(0) as usize);
        let mut t = BiTaylor::zero(dom.clone(), n);
        for j in 0..=n {
            t.c[0][j] = s.coeff_or_zero(j as i64);
        }
        t
    }

    /// f(u - v) for a Taylor series f.
    pub fn compose_u_minus_v(dom: &D, n: usize, f: &Series<D>) -> Self {
        let n = n.min(f.hi.max(0) as usize);
        let mut u_minus_v = BiTaylor::zero(dom.clone(), n);
        if n >= 1 {
            u_minus_v.c[1][0] = dom.one();
            u_minus_v.c[0][1] = dom.neg(&dom.one());
        }
        let mut acc = BiTaylor::constant(dom.clone(), n, f.coeff_or_zero(0));
        let mut pw = BiTaylor::constant(dom.clone(), n, dom.one());
        for m in 1..=(n as i64) {
            pw = pw.mul(&u_minus_v);
            let fm = f.coeff_or_zero(m);
            if !dom.is_zero(&fm) {
                acc = acc.add(&pw.scale(&fm));
            }
        }
        acc
    }

    /// The series in u at fixed v-exponent j, certified to u-order n - j.
    pub fn row(&self, j: usize) -> Series<D> {
        Series::new(
            self.dom.clone(),
            0,
            (0..=(self.n - j)).map(|i| self.c[i][j].clone()).collect(),
        )
    }

    /// Transpose (swap the two variables).
    pub fn transpose(&self) -> Self {
        let mut t = BiTaylor::zero(self.dom.clone(), self.n);
        for i in 0..=self.n {
            for j in 0..=(self.n - i) {
                t.c[i][j] = self.c[j][i].clone();
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rat, Rationals};
    use num_bigint::BigInt;

    fn qr(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn divided_difference_matches_direct_division() {
        // s(u) = u + 3u^2 + 5u^3
        let s = Series::new(Rationals, 1, vec![qr(1, 1), qr(3, 1), qr(5, 1)]).extended(9);
        let dd = BiTaylor::divided_difference(&Rationals, 6, &s);
        let su = BiTaylor::from_u_series(&Rationals, 7, &s);
        let sv = BiTaylor::from_v_series(&Rationals, 7, &s);
        let g = su.sub(&sv).div_u_minus_v().unwrap();
        for i in 0..=4 {
            for j in 0..=(4 - i) {
                assert_eq!(dd.c[i][j], g.c[i][j], "({i},{j})");
            }
        }
    }

    #[test]
    fn inverse_of_bivariate() {
        let mut a = BiTaylor::constant(Rationals, 5, qr(1, 1));
        a.c[1][0] = qr(1, 1);
        a.c[0][1] = qr(2, 1);
        let inv = a.invert().unwrap();
        let p = a.mul(&inv);
        for i in 0..=5 {
            for j in 0..=(5 - i) {
                let want = if i == 0 && j == 0 { qr(1, 1) } else { qr(0, 1) };
                assert_eq!(p.c[i][j], want);
            }
        }
    }

    #[test]
    fn non_divisible_input_is_rejected() {
        let a = BiTaylor::constant(Rationals, 3, qr(1, 1));
        assert!(a.div_u_minus_v().is_err());
    }
}
