//! The Eynard-Orantin recursion in local (Airy-coordinate) form.
//!
//! All stable correlation differentials are carried as finite coefficient
//! tensors in the preferred basis attached to the critical points; the
//! recursion never materializes global differentials. At a residue point the
//! only data that enters is parity-even: the singular parts of the basis
//! forms, the even rows of the Bergman regular parts, and the odd part of y.

pub mod descend;

use crate::curve::geometry::LocalGeometry;
use crate::error::{Error, Result};
use crate::scalar::{double_factorial_odd, Domain, Series};
use std::collections::BTreeMap;

/// One tensor slot: (critical point index, basis index k).
pub type Leg = (u8, u8);

/// Symmetric coefficient tensor of one stable correlation differential in
/// the dxi basis: entries are stored on sorted keys and are invariant under
/// permutation of slots.
#[derive(Clone, Debug)]
pub struct OmegaTensor<D: Domain> {
    pub g: u32,
    pub n: u32,
    pub entries: BTreeMap<Vec<Leg>, D::Elem>,
}

impl<D: Domain> OmegaTensor<D> {
    pub fn new(g: u32, n: u32) -> Self {
        OmegaTensor {
            g,
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn k_bound(&self) -> i64 {
        3 * self.g as i64 - 3 + self.n as i64
    }

    pub fn get(&self, key: &[Leg], dom: &D) -> D::Elem {
        let mut k = key.to_vec();
        k.sort_unstable();
        self.entries.get(&k).cloned().unwrap_or_else(|| dom.zero())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// All computed tensors, indexed by (g, n).
pub type TensorSet<D> = BTreeMap<(u32, u32), OmegaTensor<D>>;

/// Enumerate sorted multisets of `n` legs over beta < n_crit, k <= k_max.
pub fn sorted_multisets(n_crit: u8, k_max: u8, n: usize) -> Vec<Vec<Leg>> {
    let mut alphabet = vec![];
    for b in 0..n_crit {
        for k in 0..=k_max {
            alphabet.push((b, k));
        }
    }
    fn rec(
        alphabet: &[Leg],
        start: usize,
        n: usize,
        cur: &mut Vec<Leg>,
        out: &mut Vec<Vec<Leg>>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..alphabet.len() {
            cur.push(alphabet[i]);
            rec(alphabet, i, n, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    let mut cur = Vec::with_capacity(n);
    rec(&alphabet, 0, n, &mut cur, &mut out);
    out
}

/// Distinct sub-multisets (I, complement J, slot-labelled multiplicity).
fn sub_multisets(l: &[Leg]) -> Vec<(Vec<Leg>, Vec<Leg>, u64)> {
    let mut groups: Vec<(Leg, u64)> = vec![];
    for &x in l {
        if let Some(last) = groups.last_mut() {
            if last.0 == x {
                last.1 += 1;
                continue;
            }
        }
        groups.push((x, 1));
    }
    let mut out = vec![];
    let gl = groups.len();
    let mut counts = vec![0u64; gl];
    loop {
        let mut i_part = vec![];
        let mut j_part = vec![];
        let mut mult = 1u64;
        for (gi, &(val, avail)) in groups.iter().enumerate() {
            let c = counts[gi];
            for _ in 0..c {
                i_part.push(val);
            }
            for _ in 0..(avail - c) {
                j_part.push(val);
            }
            mult *= binomial(avail, c);
        }
        out.push((i_part, j_part, mult));
        let mut pos = 0;
        loop {
            if pos == gl {
                return out;
            }
            if counts[pos] < groups[pos].1 {
                counts[pos] += 1;
                break;
            }
            counts[pos] = 0;
            pos += 1;
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub struct TrEngine<'a, D: Domain> {
    pub geo: &'a LocalGeometry<D>,
    /// Even parts of the local basis-form expansions: d_even[label][k][at].
    d_even: Vec<Vec<Vec<Series<D>>>>,
    /// 1/y_odd per critical point.
    inv_y_odd: Vec<Series<D>>,
    /// Two-point self pairing omega_{0,2}(z, zbar) per critical point.
    f02: Vec<Series<D>>,
}

impl<'a, D: Domain> TrEngine<'a, D> {
    pub fn new(geo: &'a LocalGeometry<D>) -> Result<Self> {
        let k_top = geo.kmax_forms;
        let nc = geo.n_crit();
        let mut d_even = Vec::with_capacity(nc);
        for label in 0..nc {
            let mut per_k = Vec::with_capacity((k_top + 1) as usize);
            for k in 0..=k_top {
                let mut per_at = Vec::with_capacity(nc);
                for at in 0..nc {
                    per_at.push(geo.dxi_local(label, k, at)?.parity_part(true));
                }
                per_k.push(per_at);
            }
            d_even.push(per_k);
        }
        let mut inv_y_odd = Vec::with_capacity(nc);
        let mut f02 = Vec::with_capacity(nc);
        for (b, chart) in geo.charts.iter().enumerate() {
            inv_y_odd.push(chart.y_odd.invert()?);
            f02.push(geo.two_point_self(b)?);
        }
        Ok(TrEngine {
            geo,
            d_even,
            inv_y_odd,
            f02,
        })
    }

    fn dom(&self) -> &D {
        &self.geo.dom
    }

    fn d_e(&self, label: usize, k: i64, at: usize) -> &Series<D> {
        &self.d_even[label][k as usize][at]
    }

    fn stable_factor(
        &self,
        tensors: &TensorSet<D>,
        g: u32,
        rest: &[Leg],
        beta: usize,
    ) -> Option<Series<D>> {
        let n = rest.len() as u32 + 1;
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return None;
        }
        let t = tensors.get(&(g, n))?;
        let dom = self.dom();
        let mut acc = Series::zero(dom.clone(), self.geo.order);
        for j in 0..=t.k_bound() {
            let mut key = rest.to_vec();
            key.push((beta as u8, j as u8));
            let c = t.get(&key, dom);
            if dom.is_zero(&c) {
                continue;
            }
            acc = acc.add(&self.d_e(beta, j, beta).scale(&c));
        }
        Some(acc)
    }

    /// Even coefficient series of the two-point factor pairing the residue
    /// point with a spectator leg: -eta^{2k}/(2k-1)!! when the leg sits at
    /// the same critical point, zero otherwise.
    fn b_spectator_even(&self, spec: Leg, beta: usize) -> Series<D> {
        let dom = self.dom();
        if spec.0 as usize != beta {
            return Series::zero(dom.clone(), self.geo.order);
        }
        let k = spec.1 as i64;
        let df = double_factorial_odd(dom, k);
        let c = dom.neg(&dom.inv(&df).expect("odd double factorial invertible"));
        Series::monomial(dom.clone(), c, 2 * k, self.geo.order)
    }

    fn factor_even(
        &self,
        tensors: &TensorSet<D>,
        g1: u32,
        i_part: &[Leg],
        beta: usize,
    ) -> Option<Series<D>> {
        let sz = i_part.len() as u32 + 1;
        if g1 == 0 && sz == 1 {
            return None; // omega_{0,1} is excluded from the primed sum
        }
        if g1 == 0 && sz == 2 {
            return Some(self.b_spectator_even(i_part[0], beta));
        }
        self.stable_factor(tensors, g1, i_part, beta)
    }

    /// The recursion integrand numerator f(eta) at critical point beta for
    /// target (g, n+1) with spectator legs `l` (sorted).
    fn assemble_f(
        &self,
        tensors: &TensorSet<D>,
        g: u32,
        l: &[Leg],
        beta: usize,
    ) -> Result<Series<D>> {
        let dom = self.dom();
        let mut f = Series::zero(dom.clone(), self.geo.order);

        // (a) omega_{g-1, n+2}(z, zbar, L)
        if g >= 1 {
            let g1 = g - 1;
            let n1 = l.len() as u32 + 2;
            if g1 == 0 && n1 == 2 {
                f = f.add(&self.f02[beta]);
            } else if 2 * g1 as i64 - 2 + n1 as i64 > 0 {
                if let Some(t) = tensors.get(&(g1, n1)) {
                    for j1 in 0..=t.k_bound() {
                        for j2 in 0..=t.k_bound() {
                            let mut key = l.to_vec();
                            key.push((beta as u8, j1 as u8));
                            key.push((beta as u8, j2 as u8));
                            let c = t.get(&key, dom);
                            if dom.is_zero(&c) {
                                continue;
                            }
                            let prod = self
                                .d_e(beta, j1, beta)
                                .mul(self.d_e(beta, j2, beta))
                                .scale(&c);
                            f = f.sub(&prod);
                        }
                    }
                }
            }
        }

        // (b) ordered products over sub-multisets of the spectators
        for (i_part, j_part, mult) in sub_multisets(l) {
            for g1 in 0..=g {
                let g2 = g - g1;
                let f1 = self.factor_even(tensors, g1, &i_part, beta);
                let f2 = self.factor_even(tensors, g2, &j_part, beta);
                let (Some(a), Some(b)) = (f1, f2) else {
                    continue;
                };
                let m = dom.from_i64(mult as i64);
                f = f.sub(&a.mul(&b).scale(&m));
            }
        }
        Ok(f)
    }

    /// The dxi_{k0}-coefficient contributions at beta:
    /// -(1/2) [eta^{-1}] eta^{2 k0} f(eta) / ((2 k0 + 1)!! y_odd(eta)).
    fn extract_all(&self, f: &Series<D>, beta: usize, k_bound: i64) -> Result<Vec<D::Elem>> {
        let dom = self.dom();
        let p = f.mul(&self.inv_y_odd[beta]);
        let mut out = Vec::with_capacity(k_bound as usize + 1);
        let minus_half = dom.div(&dom.from_i64(-1), &dom.from_i64(2))?;
        for k0 in 0..=k_bound {
            let c = p.coeff(-2 * k0 - 1)?;
            let df = double_factorial_odd(dom, k0 + 1);
            out.push(dom.div(&dom.mul(&c, &minus_half), &df)?);
        }
        Ok(out)
    }

    /// Run the recursion for all stable (g, n) with 2g - 2 + n <= chi_max.
    pub fn recurse(&self, chi_max: i64) -> Result<TensorSet<D>> {
        let dom = self.dom().clone();
        let nc = self.geo.n_crit() as u8;
        let mut tensors: TensorSet<D> = BTreeMap::new();
        for chi in 1..=chi_max {
            let g_top = ((chi + 1) / 2) as u32;
            for g in 0..=g_top {
                let n_total = chi + 2 - 2 * g as i64;
                if n_total < 1 || (g == 0 && n_total < 3) {
                    continue;
                }
                let n_total = n_total as u32;
                let k_bound = 3 * g as i64 - 3 + n_total as i64;
                if k_bound > self.geo.kmax_forms {
                    return Err(Error::truncation(format!(
                        "target (g,n)=({g},{n_total}) needs basis forms to k={k_bound}, prepared {}",
                        self.geo.kmax_forms
                    )));
                }
                let mut tensor = OmegaTensor::new(g, n_total);
                let spectators = sorted_multisets(nc, k_bound as u8, n_total as usize - 1);
                let mut values: BTreeMap<(Vec<Leg>, Leg), D::Elem> = BTreeMap::new();
                for l in &spectators {
                    for beta in 0..nc as usize {
                        let f = self.assemble_f(&tensors, g, l, beta)?;
                        let vals = self.extract_all(&f, beta, k_bound)?;
                        for (k0, v) in vals.into_iter().enumerate() {
                            if !dom.is_zero(&v) {
                                values.insert((l.clone(), (beta as u8, k0 as u8)), v);
                            }
                        }
                    }
                }
                // assemble the symmetric tensor, checking slot-independence
                for key in sorted_multisets(nc, k_bound as u8, n_total as usize) {
                    let mut val: Option<D::Elem> = None;
                    let mut prev: Option<Leg> = None;
                    for idx in 0..key.len() {
                        if prev == Some(key[idx]) {
                            continue;
                        }
                        prev = Some(key[idx]);
                        let slot = key[idx];
                        let mut rest = key.clone();
                        rest.remove(idx);
                        let v = values
                            .get(&(rest, slot))
                            .cloned()
                            .unwrap_or_else(|| dom.zero());
                        match &val {
                            None => val = Some(v),
                            Some(v0) => {
                                if !dom.is_zero(&dom.sub(v0, &v)) {
                                    return Err(Error::Consistency(format!(
                                        "recursion output not symmetric at (g,n)=({g},{n_total}), key {key:?}"
                                    )));
                                }
                            }
                        }
                    }
                    if let Some(v) = val {
                        if !dom.is_zero(&v) {
                            tensor.entries.insert(key, v);
                        }
                    }
                }
                tensors.insert((g, n_total), tensor);
            }
        }
        Ok(tensors)
    }

    /// omega_{g,0} for g >= 2: (1/(2-2g)) sum_beta Res omega_{g,1} *
    /// (primitive of y dx based at the critical point).
    pub fn omega_g0(&self, tensors: &TensorSet<D>, g: u32) -> Result<D::Elem> {
        let dom = self.dom();
        if g < 2 {
            return Err(Error::domain("omega_{g,0} needs g >= 2"));
        }
        let t = tensors
            .get(&(g, 1))
            .ok_or_else(|| Error::domain(format!("omega_{{{g},1}} not computed")))?;
        let mut total = dom.zero();
        for (beta, chart) in self.geo.charts.iter().enumerate() {
            // primitive of y dx = int y(eta) * eta d eta, constant 0 at eta=0
            let prim = chart.y_in_eta.shift(1).antiderivative()?;
            for k in 0..=t.k_bound() {
                let c = t.get(&[(beta as u8, k as u8)], dom);
                if dom.is_zero(&c) {
                    continue;
                }
                // Res dxi_k * prim = -(2k+1)!! [eta^{2k+1}] prim
                let df = double_factorial_odd(dom, k + 1);
                let p = prim.coeff(2 * k + 1)?;
                let res = dom.neg(&dom.mul(&df, &p));
                total = dom.add(&total, &dom.mul(&c, &res));
            }
        }
        let denom = dom.from_i64(2 - 2 * g as i64);
        dom.div(&total, &denom)
    }
}
