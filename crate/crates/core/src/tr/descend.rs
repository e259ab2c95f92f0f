//! Boundary expansions of the computed tensors: descendent correlator
//! tables, boundary generating polynomials, and reduction residue checks.
//!
//! For a stable tensor F at (g, n), each leg's basis form expands at the
//! boundary as a linear form L_leg(p) = sum_j c_j p_j (substituting p_j for
//! d lambda^{-j}). The boundary polynomial
//!     B_{g,n}(p) = sum_{sorted keys} F[key] prod_legs L_leg^{mult}/mult!
//! is exactly the hbar^{2g-2+n} term of log Z, and the descendent
//! correlators are recovered from its monomial coefficients.

use super::{OmegaTensor, TensorSet};
use crate::curve::geometry::LocalGeometry;
use crate::error::{Error, Result};
use crate::scalar::{Caps, Domain, Mono, MultiPoly, Series};
use std::collections::BTreeMap;

/// Descendent correlators and the (0,2) boundary pairing.
#[derive(Clone, Debug)]
pub struct CorrelatorTable<D: Domain> {
    pub dom: D,
    pub c_max: u32,
    pub k_max: u32,
    /// (g, n, sorted indices) -> value.
    pub entries: BTreeMap<(u32, u32, Vec<u32>), D::Elem>,
    /// q[k-1][l-1] = <alpha_k, alpha_l>_{0,2}.
    pub q: Vec<Vec<D::Elem>>,
}

impl<D: Domain> CorrelatorTable<D> {
    pub fn get(&self, g: u32, n: u32, ks: &[u32]) -> D::Elem {
        let mut key = ks.to_vec();
        key.sort_unstable();
        self.entries
            .get(&(g, n, key))
            .cloned()
            .unwrap_or_else(|| self.dom.zero())
    }

    pub fn q_entry(&self, k: u32, l: u32) -> D::Elem {
        self.q
            .get((k - 1) as usize)
            .and_then(|r| r.get((l - 1) as usize))
            .cloned()
            .unwrap_or_else(|| self.dom.zero())
    }

    pub fn set(&mut self, g: u32, n: u32, ks: &[u32], v: D::Elem) {
        let mut key = ks.to_vec();
        key.sort_unstable();
        self.entries.insert((g, n, key), v);
    }
}

/// The boundary generating polynomial of one tensor, in variables p_j
/// (variable id = boundary index j), j <= k_max.
pub fn boundary_polynomial<D: Domain>(
    geo: &LocalGeometry<D>,
    tensor: &OmegaTensor<D>,
    k_max: u32,
) -> Result<MultiPoly<D>> {
    let dom = geo.dom.clone();
    let caps = Caps {
        max_hbar: 0,
        max_degree: tensor.n,
    };
    let mut acc = MultiPoly::zero(dom.clone(), caps);
    // linear form per leg, cached
    let mut leg_forms: BTreeMap<(u8, u8), MultiPoly<D>> = BTreeMap::new();
    let mut leg_form = |leg: (u8, u8)| -> Result<MultiPoly<D>> {
        if let Some(f) = leg_forms.get(&leg) {
            return Ok(f.clone());
        }
        let coeffs = geo.dxi_boundary_coeffs(leg.0 as usize, leg.1 as i64)?;
        let mut f = MultiPoly::zero(dom.clone(), caps);
        for (jm1, c) in coeffs.iter().enumerate() {
            let j = jm1 as u32 + 1;
            if j > k_max {
                break;
            }
            f.add_term(0, Mono::var(j), c.clone());
        }
        leg_forms.insert(leg, f.clone());
        Ok(f)
    };
    for (key, coeff) in tensor.entries.iter() {
        // group multiplicities
        let mut groups: Vec<((u8, u8), u32)> = vec![];
        for &leg in key {
            if let Some(last) = groups.last_mut() {
                if last.0 == leg {
                    last.1 += 1;
                    continue;
                }
            }
            groups.push((leg, 1));
        }
        let mut term = MultiPoly::one(dom.clone(), caps);
        let mut denom = dom.one();
        for (leg, mult) in groups {
            let f = leg_form(leg)?;
            for i in 1..=mult {
                term = term.mul(&f);
                denom = dom.mul(&denom, &dom.from_i64(i as i64));
            }
        }
        let c = dom.div(coeff, &denom)?;
        acc = acc.add(&term.scale(&c));
    }
    Ok(acc)
}

/// Expand every computed tensor at the boundary into a correlator table.
pub fn extract_descendents<D: Domain>(
    geo: &LocalGeometry<D>,
    tensors: &TensorSet<D>,
    c_max: u32,
    k_max: u32,
) -> Result<CorrelatorTable<D>> {
    let dom = geo.dom.clone();
    if k_max as i64 > geo.boundary.jmax {
        return Err(Error::truncation(format!(
            "window K={k_max} exceeds prepared boundary order {}",
            geo.boundary.jmax
        )));
    }
    let mut table = CorrelatorTable {
        dom: dom.clone(),
        c_max,
        k_max,
        entries: BTreeMap::new(),
        q: geo.q_matrix.clone(),
    };
    for ((g, n), tensor) in tensors.iter() {
        if 2 * *g as i64 - 2 + *n as i64 > c_max as i64 {
            continue;
        }
        let b = boundary_polynomial(geo, tensor, k_max)?;
        for ((_h, mono), c) in b.terms.iter() {
            // <alpha_J> = coeff * prod(j) * prod(mult_v!)
            let mut scale = dom.one();
            let mut idx = Vec::new();
            for &(v, e) in mono.0.iter() {
                for i in 1..=e {
                    scale = dom.mul(&scale, &dom.from_i64(v as i64));
                    scale = dom.mul(&scale, &dom.from_i64(i as i64));
                }
                for _ in 0..e {
                    idx.push(v);
                }
            }
            if idx.len() != *n as usize {
                continue;
            }
            table.set(*g, *n, &idx, dom.mul(c, &scale));
        }
    }
    Ok(table)
}

/// Per-form boundary residues Res_b x^m dxi_k; these must all vanish
/// (stable reduction constraints follow by linearity), reported per
/// (critical point, k, m).
pub fn form_reduction_residues<D: Domain>(
    geo: &LocalGeometry<D>,
    m_max: i64,
) -> Result<Vec<Vec<Vec<D::Elem>>>> {
    let dom = &geo.dom;
    let mut out = Vec::new();
    for per_beta in geo.dxi_bnd_w.iter() {
        let mut per_k = Vec::new();
        for form in per_beta.iter() {
            let mut per_m = Vec::new();
            let mut xp = Series::constant(dom.clone(), dom.one(), geo.boundary.x_in_w.hi);
            for _m in 0..=m_max {
                per_m.push(xp.mul(form).residue()?);
                xp = xp.mul(&geo.boundary.x_in_w);
            }
            per_k.push(per_m);
        }
        out.push(per_k);
    }
    Ok(out)
}

/// The subtracted two-point reduction: Res in the first slot of
/// x^m (omega_{0,2} - boundary double pole) for m = 1..=m_max; each residue
/// is a series in the second boundary coordinate and must vanish.
pub fn two_point_reduction_residues<D: Domain>(
    geo: &LocalGeometry<D>,
    m_max: i64,
) -> Result<Vec<Series<D>>> {
    let dom = &geo.dom;
    let reg = &geo.q_reg;
    let mut out = Vec::new();
    for m in 0..=m_max {
        let xm = {
            let mut xp = Series::constant(dom.clone(), dom.one(), geo.boundary.x_in_w.hi);
            for _ in 0..m {
                xp = xp.mul(&geo.boundary.x_in_w);
            }
            xp
        };
        // Res_{w1} xm(w1) * reg(w1, w2) dw1 = sum_i xm_{-1-i} reg[i][*]
        let mut max_i = 0usize;
        let mut res = Series::zero(dom.clone(), reg.n as i64);
        for i in 0..=reg.n {
            let c = xm.coeff_or_zero(-1 - i as i64);
            if dom.is_zero(&c) {
                continue;
            }
            max_i = max_i.max(i);
            for j in 0..=(reg.n - i) {
                res.add_term(j as i64, dom.mul(&c, &reg.c[i][j]));
            }
        }
        out.push(res.truncate((reg.n - max_i) as i64));
    }
    Ok(out)
}
