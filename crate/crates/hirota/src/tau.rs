//! Truncated tau-function assembly from a descendent correlator table, and
//! the polynomial-reduction constraint check.

use trtau_core::error::{Error, Result};
use trtau_core::scalar::{Caps, Domain, Mono, MultiPoly};
use trtau_core::tr::descend::CorrelatorTable;

/// The assembled truncated tau: log Z = stable part + (1/2) Q(p, p), stored
/// with caps strictly larger than the trusted window so that trust
/// accounting and metamorphic perturbations have room to act.
#[derive(Clone, Debug)]
pub struct TauData<D: Domain> {
    pub dom: D,
    /// Trusted window: correlators with 2g-2+n <= c and indices <= k.
    pub c: u32,
    pub k: u32,
    /// The stable part of log Z (no quadratic part), variables p_j = id j.
    pub log_stable: MultiPoly<D>,
    /// q[k-1][l-1] = <alpha_k, alpha_l>_{0,2}, stored to jmax >= k.
    pub q: Vec<Vec<D::Elem>>,
}

impl<D: Domain> TauData<D> {
    pub fn q_entry(&self, k: u32, l: u32) -> D::Elem {
        self.q
            .get((k - 1) as usize)
            .and_then(|r| r.get((l - 1) as usize))
            .cloned()
            .unwrap_or_else(|| self.dom.zero())
    }

    /// The exponential of the stable part, with the same caps.
    pub fn a_stable(&self) -> MultiPoly<D> {
        self.log_stable.exp()
    }
}

/// Assemble log Z from a correlator table:
/// each (g, n, sorted indices J) contributes
/// hbar^{2g-2+n} <alpha_J> p^J / (prod_i j_i * prod_v mult_v(J)!).
pub fn assemble_tau<D: Domain>(
    table: &CorrelatorTable<D>,
    store_hbar: u32,
    store_degree: u32,
    store_index: u32,
) -> Result<TauData<D>> {
    let dom = table.dom.clone();
    if store_index < table.k_max {
        return Err(Error::truncation(
            "storage index cap below the table window",
        ));
    }
    let caps = Caps {
        max_hbar: store_hbar,
        max_degree: store_degree,
    };
    let mut log_stable = MultiPoly::zero(dom.clone(), caps);
    for ((g, n, js), v) in table.entries.iter() {
        if dom.is_zero(v) {
            continue;
        }
        let chi = 2 * *g as i64 - 2 + *n as i64;
        debug_assert!(chi > 0);
        if chi > store_hbar as i64 || *n > store_degree {
            continue;
        }
        if js.iter().any(|&j| j > store_index) {
            continue;
        }
        let mut denom = dom.one();
        let mut mult_run = 0u32;
        let mut prev: Option<u32> = None;
        for &j in js.iter() {
            denom = dom.mul(&denom, &dom.from_i64(j as i64));
            if prev == Some(j) {
                mult_run += 1;
                denom = dom.mul(&denom, &dom.from_i64(mult_run as i64));
            } else {
                mult_run = 1;
                prev = Some(j);
            }
        }
        let coeff = dom.div(v, &denom)?;
        let mono = Mono::from_pairs(js.iter().map(|&j| (j, 1u32)).collect());
        log_stable.add_term(chi as u32, mono, coeff);
    }
    Ok(TauData {
        dom,
        c: table.c_max,
        k: table.k_max,
        log_stable,
        q: table.q.clone(),
    })
}

/// Convert a correlator table between coefficient domains (e.g. into the
/// fast Laurent carrier for the bilinear checks).
pub fn convert_table<D1, D2>(
    t: &CorrelatorTable<D1>,
    dom2: D2,
    f: impl Fn(&D1::Elem) -> Result<D2::Elem>,
) -> Result<CorrelatorTable<D2>>
where
    D1: Domain,
    D2: Domain,
{
    let mut entries = std::collections::BTreeMap::new();
    for (k, v) in t.entries.iter() {
        entries.insert(k.clone(), f(v)?);
    }
    let q = t
        .q
        .iter()
        .map(|row| row.iter().map(&f).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelatorTable {
        dom: dom2,
        c_max: t.c_max,
        k_max: t.k_max,
        entries,
        q,
    })
}

/// Report of the reduction constraints: for each power 1..=k_max of the
/// boundary polynomial, the constraint sum_i c_{k,i} i d/dp_i annihilates
/// log Z (stable part and quadratic part separately).
#[derive(Clone, Debug)]
pub struct ReductionReport {
    /// (power, trusted-coefficient failures, untrusted-coefficient hits)
    pub per_power: Vec<(u32, usize, usize)>,
    pub pass: bool,
}

/// x_lambda as coefficient list (low -> high); checks powers k = 1..=k_max.
pub fn reduction_check<D: Domain>(
    tau: &TauData<D>,
    x_lambda: &[D::Elem],
    k_max: u32,
) -> Result<ReductionReport> {
    let dom = &tau.dom;
    let mut per_power = vec![];
    let mut pass = true;
    // powers of x_lambda as polynomial coefficient vectors
    let mut xp = vec![dom.one()];
    for kpow in 1..=k_max {
        xp = poly_mul(dom, &xp, x_lambda);
        // operator D = sum_{i>=1} c_i * i * d/dp_i applied to log_stable
        let mut derived = MultiPoly::zero(dom.clone(), tau.log_stable.caps);
        for (i, c) in xp.iter().enumerate().skip(1) {
            if dom.is_zero(c) {
                continue;
            }
            let d = tau.log_stable.derivative_var(i as u32);
            let w = dom.mul(c, &dom.from_i64(i as i64));
            derived = derived.add(&d.scale(&w));
        }
        let mut trusted_fail = 0usize;
        let mut untrusted = 0usize;
        for ((h, m), v) in derived.terms.iter() {
            if dom.is_zero(v) {
                continue;
            }
            // the source monomial had one extra index (the differentiated
            // slot, of index <= deg x^k); trust requires the source inside
            // the window.
            let src_ok = *h <= tau.c
                && m.0.iter().all(|&(var, _)| var <= tau.k)
                && (xp.len() as u32 - 1) <= tau.k;
            if src_ok {
                trusted_fail += 1;
            } else {
                untrusted += 1;
            }
        }
        // quadratic part: sum_i c_i i <alpha_i, alpha_l> must vanish per l
        let jmax = tau.q.len() as u32;
        for l in 1..=jmax {
            let mut acc = dom.zero();
            let mut all_in = (xp.len() as u32 - 1) <= tau.k && l <= tau.k;
            for (i, c) in xp.iter().enumerate().skip(1) {
                if dom.is_zero(c) {
                    continue;
                }
                if i as u32 > jmax {
                    all_in = false;
                    continue;
                }
                let q = tau.q_entry(i as u32, l);
                acc = dom.add(&acc, &dom.mul(c, &dom.mul(&q, &dom.from_i64(i as i64))));
            }
            if !dom.is_zero(&acc) {
                if all_in && l <= tau.k {
                    trusted_fail += 1;
                } else {
                    untrusted += 1;
                }
            }
        }
        if trusted_fail > 0 {
            pass = false;
        }
        per_power.push((kpow, trusted_fail, untrusted));
    }
    Ok(ReductionReport { per_power, pass })
}

fn poly_mul<D: Domain>(dom: &D, a: &[D::Elem], b: &[D::Elem]) -> Vec<D::Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![dom.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = dom.add(&out[i + j], &dom.mul(x, y));
        }
    }
    out
}
