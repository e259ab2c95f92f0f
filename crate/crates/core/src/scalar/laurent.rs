//! Truncated Laurent series in one variable.
//!
//! A series holds exact coefficients for exponents in `[lo, hi]` and is
//! `O(x^{hi+1})` beyond; `hi` is the certified truncation order and is
//! propagated through every operation as the provable minimum of the input
//! validity windows. Requests outside the window fail loudly with a
//! truncation error.

use super::Domain;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Debug)]
pub struct Series<D: Domain> {
    pub dom: D,
    pub lo: i64,
    pub hi: i64,
    /// Coefficient of x^(lo + i) at index i. The vector may be shorter than
    /// the window [lo, hi]; missing high entries are zero.
    coeffs: Vec<D::Elem>,
}

impl<D: Domain> Series<D> {
    pub fn new(dom: D, lo: i64, coeffs: Vec<D::Elem>) -> Self {
        let hi = lo + coeffs.len() as i64 - 1;
        Series { dom, lo, hi, coeffs }
    }

    /// The zero series known through order `hi`.
    pub fn zero(dom: D, hi: i64) -> Self {
        Series {
            dom,
            lo: hi + 1,
            hi,
            coeffs: vec![],
        }
    }

    pub fn constant(dom: D, c: D::Elem, hi: i64) -> Self {
        let mut s = Series::zero(dom, hi);
        s.add_term(0, c);
        s
    }

    /// Monomial c*x^k known through `hi`.
    pub fn monomial(dom: D, c: D::Elem, k: i64, hi: i64) -> Self {
        let mut s = Series::zero(dom, hi);
        s.add_term(k, c);
        s
    }

    pub fn coeff(&self, k: i64) -> Result<D::Elem> {
        if k > self.hi {
            return Err(Error::truncation(format!(
                "coefficient at order {k} requested, certified only through {}",
                self.hi
            )));
        }
        if k < self.lo {
            return Ok(self.dom.zero());
        }
        Ok(self
            .coeffs
            .get((k - self.lo) as usize)
            .cloned()
            .unwrap_or_else(|| self.dom.zero()))
    }

    /// Coefficient when within window, zero otherwise (no certification).
    pub fn coeff_or_zero(&self, k: i64) -> D::Elem {
        if k < self.lo || k > self.hi {
            self.dom.zero()
        } else {
            self.coeffs
                .get((k - self.lo) as usize)
                .cloned()
                .unwrap_or_else(|| self.dom.zero())
        }
    }

    pub fn add_term(&mut self, k: i64, c: D::Elem) {
        if k > self.hi {
            // beyond certification: ignore (it is inside the O-term)
            return;
        }
        if self.coeffs.is_empty() {
            self.lo = k;
            self.coeffs.push(c);
            return;
        }
        if k < self.lo {
            let pad = (self.lo - k) as usize;
            let mut v = vec![self.dom.zero(); pad];
            v.extend(self.coeffs.drain(..));
            self.coeffs = v;
            self.lo = k;
        }
        let i = (k - self.lo) as usize;
        if i >= self.coeffs.len() {
            self.coeffs
                .resize_with(i + 1, || self.dom.zero());
        }
        self.coeffs[i] = self.dom.add(&self.coeffs[i], &c);
    }

    /// Lowest exponent with a nonzero stored coefficient.
    pub fn order(&self) -> Option<i64> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !self.dom.is_zero(c) {
                return Some(self.lo + i as i64);
            }
        }
        None
    }

    pub fn is_zero_series(&self) -> bool {
        self.order().is_none()
    }

    fn trim_low(&mut self) {
        while let Some(c) = self.coeffs.first() {
            if self.dom.is_zero(c) {
                self.coeffs.remove(0);
                self.lo += 1;
            } else {
                break;
            }
        }
    }

    pub fn truncate(mut self, hi: i64) -> Self {
        if hi < self.hi {
            let keep = (hi - self.lo + 1).max(0) as usize;
            if keep < self.coeffs.len() {
                self.coeffs.truncate(keep);
            }
            self.hi = hi;
            if self.coeffs.is_empty() {
                self.lo = hi + 1;
            }
        }
        self
    }

    /// Widen the certified window by zero padding. Only valid when the
    /// caller knows the series is exact beyond its stored window (finite
    /// Laurent polynomials).
    pub fn extended(mut self, hi: i64) -> Self {
        if hi > self.hi {
            self.hi = hi;
            if self.coeffs.is_empty() {
                self.lo = hi + 1;
            }
        }
        self
    }

    pub fn map<E: Domain>(&self, dom2: E, f: impl Fn(&D::Elem) -> E::Elem) -> Series<E> {
        Series {
            dom: dom2,
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let hi = self.hi.min(other.hi);
        let lo = self.lo.min(other.lo).min(hi + 1);
        let mut coeffs = Vec::with_capacity((hi - lo + 1).max(0) as usize);
        for k in lo..=hi {
            coeffs.push(self.dom.add(&self.coeff_or_zero(k), &other.coeff_or_zero(k)));
        }
        let mut s = Series { dom: self.dom.clone(), lo, hi, coeffs };
        s.trim_low();
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Series {
            dom: self.dom.clone(),
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|c| self.dom.neg(c)).collect(),
        }
    }

    pub fn scale(&self, s: &D::Elem) -> Self {
        Series {
            dom: self.dom.clone(),
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|c| self.dom.mul(c, s)).collect(),
        }
    }

    /// Multiply by x^n.
    pub fn shift(&self, n: i64) -> Self {
        Series {
            dom: self.dom.clone(),
            lo: self.lo + n,
            hi: self.hi + n,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // The validity window uses the true orders: with A = a x^{ordA} + ...
        // + O(x^{hiA+1}), the product error is O(x^{ordA + hiB + 1}) +
        // O(x^{ordB + hiA + 1}). Stored leading zeros must not degrade this.
        let dom = &self.dom;
        let ord_a = self.order().unwrap_or(self.hi + 1);
        let ord_b = other.order().unwrap_or(other.hi + 1);
        let hi = (ord_a + other.hi).min(ord_b + self.hi);
        if self.is_zero_series() || other.is_zero_series() {
            return Series::zero(dom.clone(), hi);
        }
        let lo = ord_a + ord_b;
        let stored_hi = (self.lo + self.coeffs.len() as i64 - 1 + other.lo
            + other.coeffs.len() as i64
            - 1)
            .min(hi);
        let mut coeffs = vec![dom.zero(); (stored_hi - lo + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if dom.is_zero(a) {
                continue;
            }
            let ka = self.lo + i as i64;
            if ka + ord_b > stored_hi {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = ka + other.lo + j as i64;
                if k > stored_hi {
                    break;
                }
                if k < lo {
                    debug_assert!(dom.is_zero(b) || dom.is_zero(a));
                    continue;
                }
                let idx = (k - lo) as usize;
                coeffs[idx] = dom.add(&coeffs[idx], &dom.mul(a, b));
            }
        }
        let mut s = Series { dom: dom.clone(), lo, hi, coeffs };
        s.trim_low();
        s
    }

    /// Multiplicative inverse; the leading coefficient must be invertible.
    pub fn invert(&self) -> Result<Self> {
        let dom = &self.dom;
        let ord = self
            .order()
            .ok_or_else(|| Error::DivisionByZero("series inversion".into()))?;
        let lead = self.coeff(ord)?;
        let lead_inv = dom.inv(&lead)?;
        let width = self.hi - ord;
        // u = self / (lead x^ord) = 1 + t, invert by Neumann recurrence.
        let mut inv = vec![dom.zero(); (width + 1) as usize];
        inv[0] = dom.one();
        for m in 1..=width {
            // coefficient of x^m in u * inv must vanish
            let mut acc = dom.zero();
            for j in 0..m {
                let u_c = self.coeff_or_zero(ord + (m - j));
                let u_c = dom.mul(&u_c, &lead_inv);
                acc = dom.add(&acc, &dom.mul(&u_c, &inv[j as usize]));
            }
            inv[m as usize] = dom.neg(&acc);
        }
        let coeffs = inv.iter().map(|c| dom.mul(c, &lead_inv)).collect();
        Ok(Series {
            dom: dom.clone(),
            lo: -ord,
            hi: -ord + width,
            coeffs,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.invert()?))
    }

    pub fn pow_i64(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(Series::constant(self.dom.clone(), self.dom.one(), self.hi));
        }
        let base = if n < 0 { self.invert()? } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// d/dx.
    pub fn derivative(&self) -> Self {
        let dom = &self.dom;
        let mut out = Series::zero(dom.clone(), self.hi - 1);
        for k in self.lo..=self.hi {
            if k == 0 {
                continue;
            }
            let c = self.coeff_or_zero(k);
            out.add_term(k - 1, dom.mul(&c, &dom.from_i64(k)));
        }
        out
    }

    /// Antiderivative with zero constant term; errors if an x^{-1} term is
    /// present and nonzero.
    pub fn antiderivative(&self) -> Result<Self> {
        let dom = &self.dom;
        if self.lo <= -1 && -1 <= self.hi && !dom.is_zero(&self.coeff_or_zero(-1)) {
            return Err(Error::domain(
                "antiderivative of a series with residue would need a log term",
            ));
        }
        let mut out = Series::zero(dom.clone(), self.hi + 1);
        for k in self.lo..=self.hi {
            if k == -1 {
                continue;
            }
            let c = self.coeff_or_zero(k);
            let coeff = dom
                .div(&c, &dom.from_i64(k + 1))
                .expect("k+1 nonzero here");
            out.add_term(k + 1, coeff);
        }
        Ok(out)
    }

    /// The coefficient of x^{-1}; errors only when the window cannot certify
    /// it (hi < -1).
    pub fn residue(&self) -> Result<D::Elem> {
        if self.hi < -1 {
            return Err(Error::truncation(
                "residue requested but the window ends below order -1",
            ));
        }
        Ok(self.coeff_or_zero(-1))
    }

    /// Even/odd part under x -> -x.
    pub fn parity_part(&self, even: bool) -> Self {
        let mut out = Series::zero(self.dom.clone(), self.hi);
        for k in self.lo..=self.hi {
            let keep = (k.rem_euclid(2) == 0) == even;
            if keep {
                out.add_term(k, self.coeff_or_zero(k));
            }
        }
        out
    }

    /// Substitute x -> -x (coefficients of odd powers flip sign).
    pub fn flip_sign_var(&self) -> Self {
        let mut out = Series::zero(self.dom.clone(), self.hi);
        for k in self.lo..=self.hi {
            let c = self.coeff_or_zero(k);
            if k.rem_euclid(2) == 1 {
                out.add_term(k, self.dom.neg(&c));
            } else {
                out.add_term(k, c);
            }
        }
        out
    }

    /// Composition self(other); `other` must have strictly positive order.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let dom = &self.dom;
        let lt = other.order().unwrap_or(other.hi + 1);
        if lt < 1 {
            return Err(Error::domain(
                "series composition needs an inner series of positive order",
            ));
        }
        let hs = self.hi;
        let ls = self.lo;
        let ht = other.hi;
        // error terms: O(inner^{hs+1}) and d(outer)/dv ~ v^{ls-1} * O(x^{ht+1})
        let hi_res = ((hs + 1) * lt).min(lt * (ls - 1) + ht + 1) - 1;
        let mut acc = Series::zero(dom.clone(), hi_res);
        // positive/zero powers by Horner from the top
        if hs >= 0 {
            let mut horner = Series::zero(dom.clone(), i64::MAX / 4);
            for k in (0..=hs).rev() {
                horner.add_term(0, self.coeff_or_zero(k));
                if k > 0 {
                    horner = horner.mul(other).truncate(hi_res + lt);
                }
            }
            acc = acc.add(&horner.truncate(hi_res));
        }
        // negative powers via the inverse of the inner series:
        // sum_{k<0} c_k v^k = inv*(c_{-1} + inv*(c_{-2} + ... )) from inside out
        if ls < 0 {
            let inv = other.invert()?;
            let mut neg_h = Series::zero(dom.clone(), i64::MAX / 4);
            for k in ls..=(-1).min(hs) {
                neg_h.add_term(0, self.coeff_or_zero(k));
                neg_h = neg_h.mul(&inv);
            }
            acc = acc.add(&neg_h.truncate(hi_res));
        }
        Ok(acc.truncate(hi_res))
    }

    /// Compositional inverse: for s = c1 v + c2 v^2 + ... with invertible c1,
    /// returns t with s(t(w)) = w + O(w^{N+1}), N = s.hi.
    pub fn invert_composition(&self) -> Result<Self> {
        let dom = &self.dom;
        if self.order() != Some(1) {
            return Err(Error::domain(
                "compositional inverse needs a series of exact order 1",
            ));
        }
        let n = self.hi;
        let c1 = self.coeff(1)?;
        let c1_inv = dom.inv(&c1)?;
        // t = sum a_j w^j, solve order by order.
        let mut t = Series::monomial(dom.clone(), c1_inv.clone(), 1, n);
        for m in 2..=n {
            // [w^m] s(t) with current t (a_m = 0 so far)
            let st = self.clone().truncate(m).compose(&t.clone().truncate(m))?;
            let err = st.coeff(m)?;
            // adding a_m w^m changes [w^m] by c1 * a_m
            let a_m = dom.neg(&dom.mul(&err, &c1_inv));
            t.add_term(m, a_m);
        }
        Ok(t)
    }

    /// Square root with an explicit branch for the leading coefficient:
    /// `branch^2` must equal the leading coefficient and the leading order
    /// must be even.
    pub fn sqrt_with_branch(&self, branch: &D::Elem) -> Result<Self> {
        self.nth_root_with_branch(2, branch)
    }

    /// n-th root: the leading order must be divisible by n and branch^n must
    /// equal the leading coefficient, via the binomial series for (1+u)^{1/n}.
    pub fn nth_root_with_branch(&self, n: u32, branch: &D::Elem) -> Result<Self> {
        let dom = &self.dom;
        let ord = self
            .order()
            .ok_or_else(|| Error::domain("root of the zero series"))?;
        if ord.rem_euclid(n as i64) != 0 {
            return Err(Error::domain(format!(
                "root of order {n} needs leading order divisible by {n}, got {ord}"
            )));
        }
        let lead = self.coeff(ord)?;
        let mut bp = dom.one();
        for _ in 0..n {
            bp = dom.mul(&bp, branch);
        }
        if bp != lead {
            return Err(Error::domain(
                "branch does not match the leading coefficient",
            ));
        }
        // u = self/(lead x^ord) - 1, then root = branch x^{ord/n} (1+u)^{1/n}
        let lead_inv = dom.inv(&lead)?;
        let u = self.shift(-ord).scale(&lead_inv);
        let width = u.hi;
        let mut pow = Series::constant(dom.clone(), dom.one(), width); // u^j accumulator
        let mut acc = Series::constant(dom.clone(), dom.one(), width);
        let u_minus_1 = {
            let mut v = u.clone();
            v.add_term(0, dom.neg(&dom.one()));
            v
        };
        // binomial(1/n, j)
        let mut binom = BigRational::from(BigInt::from(1));
        let inv_n = BigRational::new(BigInt::from(1), BigInt::from(n as i64));
        for j in 1..=width.max(0) {
            binom *= (inv_n.clone() - BigRational::from(BigInt::from(j - 1)))
                / BigRational::from(BigInt::from(j));
            pow = pow.mul(&u_minus_1).truncate(width);
            acc = acc.add(&pow.scale(&dom.from_rat(&binom)));
        }
        Ok(acc.scale(branch).shift(ord / n as i64))
    }

    pub fn fmt_with(&self, var: &str) -> String {
        let mut parts = vec![];
        for k in self.lo..=self.hi {
            let c = self.coeff_or_zero(k);
            if self.dom.is_zero(&c) {
                continue;
            }
            let cs = self.dom.fmt_elem(&c);
            parts.push(match k {
                0 => format!("({cs})"),
                1 => format!("({cs})*{var}"),
                _ => format!("({cs})*{var}^{k}"),
            });
        }
        if parts.is_empty() {
            format!("O({var}^{})", self.hi + 1)
        } else {
            format!("{} + O({var}^{})", parts.join(" + "), self.hi + 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Domain, Rat, RatFuncs, Rationals};
    use super::*;
    use num_bigint::BigInt;

    fn q() -> Rationals {
        Rationals
    }

    fn qr(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn residue_reads_the_minus_one_coefficient() {
        // z^-2 + 3 z^-1 + 5
        let s = Series::new(q(), -2, vec![qr(1, 1), qr(3, 1), qr(5, 1)]);
        assert_eq!(s.residue().unwrap(), qr(3, 1));
        // 1 + z^2 has no pole
        let s = Series::new(q(), 0, vec![qr(1, 1), qr(0, 1), qr(1, 1)]);
        assert_eq!(s.residue().unwrap(), qr(0, 1));
    }

    #[test]
    fn residue_of_geometric_expansion() {
        // (1/z) * (1+z)^{-1}: expand (1+z)^{-1} by inversion, shift by -1
        let one_plus_z = Series::new(q(), 0, vec![qr(1, 1), qr(1, 1)]).extended(8);
        let geo = one_plus_z.invert().unwrap();
        // oracle: geometric series sum (-1)^k z^k
        for k in 0..=6 {
            assert_eq!(geo.coeff(k).unwrap(), qr(if k % 2 == 0 { 1 } else { -1 }, 1));
        }
        let s = geo.shift(-1);
        assert_eq!(s.residue().unwrap(), qr(1, 1));
    }

    #[test]
    fn residue_too_shallow_errors() {
        let s = Series::new(q(), -4, vec![qr(1, 1)]); // known only to z^-4
        assert!(s.residue().is_err());
    }

    #[test]
    fn residue_is_linear_and_kills_derivatives() {
        // randomized Laurent polynomials: Res d f = 0
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let lo = -(rng.gen_range(1..5) as i64);
            let coeffs: Vec<Rat> = (0..10).map(|_| qr(rng.gen_range(-9..9), 1)).collect();
            let f = Series::new(q(), lo, coeffs);
            let df = f.derivative();
            assert_eq!(df.residue().unwrap(), qr(0, 1));
        }
    }

    #[test]
    fn compositional_inverse_identity_and_linear() {
        let id = Series::monomial(q(), qr(1, 1), 1, 8);
        let inv = id.invert_composition().unwrap();
        assert_eq!(inv.coeff(1).unwrap(), qr(1, 1));
        for k in 2..=8 {
            assert_eq!(inv.coeff(k).unwrap(), qr(0, 1));
        }
        let two_z = Series::monomial(q(), qr(2, 1), 1, 8);
        let half = two_z.invert_composition().unwrap();
        assert_eq!(half.coeff(1).unwrap(), qr(1, 2));
    }

    #[test]
    fn compositional_inverse_catalan_oracle() {
        // s = z + z^2; inverse coefficients are signed Catalan numbers:
        // z = w - w^2 + 2w^3 - 5w^4 + 14w^5 - ...
        // oracle: iterate t <- w - t^2 (fixed point of t = w - t^2)
        let n = 9i64;
        let s = Series::new(q(), 1, vec![qr(1, 1), qr(1, 1)]).extended(n);
        let t = s.invert_composition().unwrap();
        let mut oracle = Series::monomial(q(), qr(1, 1), 1, n);
        for _ in 0..n {
            let t2 = oracle.mul(&oracle).truncate(n);
            let mut next = Series::monomial(q(), qr(1, 1), 1, n);
            next = next.sub(&t2);
            oracle = next;
        }
        for k in 1..=n {
            assert_eq!(t.coeff(k).unwrap(), oracle.coeff(k).unwrap(), "k={k}");
        }
        assert_eq!(t.coeff(4).unwrap(), qr(-5, 1));
        // and s(t(w)) = w on the certified window
        let back = s.compose(&t).unwrap();
        assert_eq!(back.coeff(1).unwrap(), qr(1, 1));
        for k in 2..=back.hi {
            assert_eq!(back.coeff(k).unwrap(), qr(0, 1), "k={k}");
        }
    }

    #[test]
    fn compositional_inverse_random_roundtrip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = 8i64;
            let mut coeffs = vec![qr(rng.gen_range(1..5), 1)];
            for _ in 2..=n {
                coeffs.push(qr(rng.gen_range(-5..5), rng.gen_range(1..4)));
            }
            let s = Series::new(q(), 1, coeffs).extended(n);
            let t = s.invert_composition().unwrap();
            let back = s.compose(&t).unwrap();
            assert_eq!(back.coeff(1).unwrap(), qr(1, 1));
            for k in 2..=back.hi {
                assert_eq!(back.coeff(k).unwrap(), qr(0, 1));
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        // sqrt(z^2) with branch z
        let s = Series::monomial(q(), qr(1, 1), 2, 8);
        let r = s.sqrt_with_branch(&qr(1, 1)).unwrap();
        assert_eq!(r.coeff(1).unwrap(), qr(1, 1));
        assert!(r.clone().truncate(6).sub(&Series::monomial(q(), qr(1, 1), 1, 6)).is_zero_series());

        // sqrt(4 + 4z) with branch 2 -> 2 + z - z^2/4 + O(z^3)
        let s = Series::new(q(), 0, vec![qr(4, 1), qr(4, 1)]).extended(6);
        let r = s.sqrt_with_branch(&qr(2, 1)).unwrap();
        assert_eq!(r.coeff(0).unwrap(), qr(2, 1));
        assert_eq!(r.coeff(1).unwrap(), qr(1, 1));
        assert_eq!(r.coeff(2).unwrap(), qr(-1, 4));
        let sq = r.mul(&r);
        assert_eq!(sq.coeff(0).unwrap(), qr(4, 1));
        assert_eq!(sq.coeff(1).unwrap(), qr(4, 1));
        for k in 2..=sq.hi {
            assert_eq!(sq.coeff(k).unwrap(), qr(0, 1));
        }

        // wrong branch rejected
        assert!(Series::monomial(q(), qr(1, 1), 2, 8)
            .sqrt_with_branch(&qr(2, 1))
            .is_err());
        // odd leading order rejected
        assert!(Series::monomial(q(), qr(1, 1), 1, 8)
            .sqrt_with_branch(&qr(1, 1))
            .is_err());
    }

    #[test]
    fn sqrt_with_parameter_boundary_case() {
        // In the boundary coordinate w = 1/z:
        // z^2 - eps z = w^{-2}(1 - eps w); the branch with lambda/z -> 1
        // gives sqrt = w^{-1} - eps/2 - (eps^2/8) w + O(w^2).
        let dom = RatFuncs::new("eps");
        let eps = dom.gen();
        let one = dom.one();
        let s = Series::new(dom.clone(), -2, vec![one.clone(), dom.neg(&eps)]).extended(8);
        let r = s.sqrt_with_branch(&one).unwrap();
        assert_eq!(r.coeff(-1).unwrap(), one);
        let half = dom.from_rat(&qr(1, 2));
        assert_eq!(r.coeff(0).unwrap(), dom.neg(&dom.mul(&eps, &half)));
        let eighth = dom.from_rat(&qr(1, 8));
        let e2 = dom.mul(&eps, &eps);
        assert_eq!(r.coeff(1).unwrap(), dom.neg(&dom.mul(&e2, &eighth)));
        // squaring check
        let sq = r.mul(&r);
        assert_eq!(sq.coeff(-2).unwrap(), one);
        assert_eq!(sq.coeff(-1).unwrap(), dom.neg(&eps));
        for k in 0..=sq.hi {
            assert!(dom.is_zero(&sq.coeff(k).unwrap()), "k={k}");
        }
    }

    #[test]
    fn random_sqrt_squares_back() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let lead: i64 = *[1, 4, 9].iter().nth(rng.gen_range(0..3)).unwrap();
            let branch = qr((lead as f64).sqrt() as i64, 1);
            let mut coeffs = vec![qr(lead, 1)];
            for _ in 0..7 {
                coeffs.push(qr(rng.gen_range(-6..6), 1));
            }
            let s = Series::new(q(), 0, coeffs);
            let r = s.sqrt_with_branch(&branch).unwrap();
            let sq = r.mul(&r);
            for k in 0..=sq.hi {
                assert_eq!(sq.coeff(k).unwrap(), s.coeff_or_zero(k));
            }
        }
    }

    #[test]
    fn truncation_is_tracked_through_multiplication() {
        let a = Series::new(q(), 0, vec![qr(1, 1); 5]); // known to z^4
        let b = Series::new(q(), -2, vec![qr(1, 1); 4]); // known to z^1
        let p = a.mul(&b);
        // validity: min(0 + 1, -2 + 4) = -1 + ... = min(lo_a+hi_b, lo_b+hi_a)
        assert_eq!(p.hi, (0 + 1).min(-2 + 4));
        assert!(p.coeff(p.hi + 1).is_err());
    }
}
