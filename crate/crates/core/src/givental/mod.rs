//! Givental calibration data extracted from the curve by formal Gaussian
//! moments, and a stable-graph-sum oracle for small ancestor correlators.
//!
//! The Laplace-type integrals defining the calibration are evaluated as
//! formal moment expansions (each even power eta^{2k} contributes
//! (2k-1)!! u^k under the normalized kernel), never by quadrature; the
//! prefactors cancel structurally so everything stays in the scalar domain.

pub mod dvv;

use crate::curve::geometry::LocalGeometry;
use crate::error::{Error, Result};
use crate::scalar::{double_factorial_odd, Domain, Rat};
use crate::tr::{Leg, OmegaTensor, TensorSet};
use dvv::KwOracle;
use num_bigint::BigInt;

/// Square matrices over the domain, indexed by normalized-canonical labels.
pub type Mat<D> = Vec<Vec<<D as Domain>::Elem>>;
pub type Vect<D> = Vec<<D as Domain>::Elem>;

pub fn mat_zero<D: Domain>(dom: &D, n: usize) -> Mat<D> {
    vec![vec![dom.zero(); n]; n]
}

pub fn mat_id<D: Domain>(dom: &D, n: usize) -> Mat<D> {
    let mut m = mat_zero(dom, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = dom.one();
    }
    m
}

pub fn mat_mul<D: Domain>(dom: &D, a: &Mat<D>, b: &Mat<D>) -> Mat<D> {
    let n = a.len();
    let mut out = mat_zero(dom, n);
    for i in 0..n {
        for k in 0..n {
            if dom.is_zero(&a[i][k]) {
                continue;
            }
            for j in 0..n {
                out[i][j] = dom.add(&out[i][j], &dom.mul(&a[i][k], &b[k][j]));
            }
        }
    }
    out
}

pub fn mat_add<D: Domain>(dom: &D, a: &Mat<D>, b: &Mat<D>) -> Mat<D> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| dom.add(x, y)).collect())
        .collect()
}

pub fn mat_sub<D: Domain>(dom: &D, a: &Mat<D>, b: &Mat<D>) -> Mat<D> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| dom.sub(x, y)).collect())
        .collect()
}

pub fn mat_scale<D: Domain>(dom: &D, a: &Mat<D>, s: &D::Elem) -> Mat<D> {
    a.iter()
        .map(|r| r.iter().map(|x| dom.mul(x, s)).collect())
        .collect()
}

pub fn mat_transpose<D: Domain>(a: &Mat<D>) -> Mat<D> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| a[j][i].clone()).collect())
        .collect()
}

pub fn mat_is_zero<D: Domain>(dom: &D, a: &Mat<D>) -> bool {
    a.iter().all(|r| r.iter().all(|x| dom.is_zero(x)))
}

/// R(u) = Id + R_1 u + ... + R_L u^L in the normalized canonical basis.
#[derive(Clone, Debug)]
pub struct RMatrix<D: Domain> {
    pub mats: Vec<Mat<D>>,
}

impl<D: Domain> RMatrix<D> {
    pub fn order(&self) -> usize {
        self.mats.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.mats[0].len()
    }

    /// Coefficients of R(u)^{-1} to the same order.
    pub fn inverse(&self, dom: &D) -> Vec<Mat<D>> {
        let n = self.dim();
        let l = self.order();
        let mut inv: Vec<Mat<D>> = vec![mat_id(dom, n)];
        for m in 1..=l {
            let mut acc = mat_zero(dom, n);
            for j in 1..=m {
                acc = mat_add(dom, &acc, &mat_mul(dom, &self.mats[j], &inv[m - j]));
            }
            inv.push(mat_scale(dom, &acc, &dom.from_i64(-1)));
        }
        inv
    }

    /// The symplectic defect R*(-u) R(u) - Id, order by order.
    pub fn symplectic_defect(&self, dom: &D) -> Vec<Mat<D>> {
        let n = self.dim();
        let l = self.order();
        let mut out = vec![];
        for m in 0..=l {
            let mut acc = mat_zero(dom, n);
            for j in 0..=m {
                let mut t = mat_mul(dom, &mat_transpose::<D>(&self.mats[j]), &self.mats[m - j]);
                if j % 2 == 1 {
                    t = mat_scale(dom, &t, &dom.from_i64(-1));
                }
                acc = mat_add(dom, &acc, &t);
            }
            if m == 0 {
                acc = mat_sub(dom, &acc, &mat_id(dom, n));
            }
            out.push(acc);
        }
        out
    }
}

/// Extract the R-matrix from the even Bergman data by formal Gaussian
/// moments: (R_l)_{beta gamma} = -(-1)^l (2l-3)!! B[beta][gamma]_{0, 2l-2}.
pub fn extract_r<D: Domain>(geo: &LocalGeometry<D>, order: usize) -> Result<RMatrix<D>> {
    let dom = &geo.dom;
    let n = geo.n_crit();
    let mut mats = vec![mat_id(dom, n)];
    for l in 1..=order {
        let mut m = mat_zero(dom, n);
        for (beta, row) in m.iter_mut().enumerate() {
            for (gamma, entry) in row.iter_mut().enumerate() {
                // (R_l)_{beta gamma} = -(-1)^l (2l-3)!! B_{0, 2l-2}
                let b = geo.b_reg[beta][gamma].coeff(0, 2 * l - 2)?;
                let df = double_factorial_odd(dom, l as i64 - 1);
                let v = dom.mul(&df, &b);
                *entry = if l % 2 == 0 { dom.neg(&v) } else { v };
            }
        }
        mats.push(m);
    }
    Ok(RMatrix { mats })
}

/// T-vector and vacuum vector by moments and residues.
pub struct Calibration<D: Domain> {
    pub r: RMatrix<D>,
    /// t[m] = T_{m+1} components (t[0] = T_1).
    pub t: Vec<Vect<D>>,
    /// v[m] = vacuum coefficient of u^m.
    pub v: Vec<Vect<D>>,
}

pub fn extract_calibration<D: Domain>(
    geo: &LocalGeometry<D>,
    order: usize,
) -> Result<Calibration<D>> {
    let dom = &geo.dom;
    let n = geo.n_crit();
    let r = extract_r(geo, order)?;
    // odd coefficients a_m of y per critical point
    let mut a = vec![vec![dom.zero(); order + 2]; n];
    for (b, chart) in geo.charts.iter().enumerate() {
        for (m, am) in a[b].iter_mut().enumerate() {
            *am = chart.y_odd.coeff(2 * m as i64 + 1)?;
        }
    }
    // T_1 = 1 - a_0; T_{m+1} = -(2m+1)!! a_m for m >= 1
    let mut t = Vec::with_capacity(order);
    for m in 0..order {
        let mut tv = vec![dom.zero(); n];
        for (b, tvb) in tv.iter_mut().enumerate() {
            if m == 0 {
                *tvb = dom.sub(&dom.one(), &a[b][0]);
            } else {
                let df = double_factorial_odd(dom, m as i64 + 1);
                *tvb = dom.neg(&dom.mul(&df, &a[b][m]));
            }
        }
        t.push(tv);
    }
    // v_m^beta = sum_{l, gamma} (R_l)_{beta gamma} (2(m-l)+1)!! a_{m-l}^gamma
    let mut v = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut vm = vec![dom.zero(); n];
        for (beta, vmb) in vm.iter_mut().enumerate() {
            for l in 0..=m.min(r.order()) {
                for gamma in 0..n {
                    let df = double_factorial_odd(dom, (m - l) as i64 + 1);
                    let w = dom.mul(&df, &a[gamma][m - l]);
                    *vmb = dom.add(vmb, &dom.mul(&r.mats[l][beta][gamma], &w));
                }
            }
        }
        v.push(vm);
    }
    Ok(Calibration { r, t, v })
}

/// The consistency triangle T(u) = u 1bar - u R(u)^{-1} v(u): the defect per
/// order must vanish through the common order.
pub fn t_vacuum_defect<D: Domain>(dom: &D, cal: &Calibration<D>) -> Vec<Vect<D>> {
    let n = cal.r.dim();
    let inv = cal.r.inverse(dom);
    let mut out = vec![];
    for m in 0..cal.t.len() {
        let mut want = vec![dom.zero(); n];
        for (beta, wb) in want.iter_mut().enumerate() {
            if m == 0 {
                *wb = dom.one();
            }
            for l in 0..=m.min(inv.len() - 1) {
                for gamma in 0..n {
                    *wb = dom.sub(wb, &dom.mul(&inv[l][beta][gamma], &cal.v[m - l][gamma]));
                }
            }
        }
        let defect: Vect<D> = want
            .iter()
            .zip(&cal.t[m])
            .map(|(w, t)| dom.sub(w, t))
            .collect();
        out.push(defect);
    }
    out
}

/// V-matrix coefficients of (Id - R*(-u)R(-v))/(u+v); division failure
/// signals a broken symplectic condition upstream.
pub fn v_matrix<D: Domain>(dom: &D, r: &RMatrix<D>) -> Result<Vec<Vec<Mat<D>>>> {
    let n = r.dim();
    let l = r.order();
    if l == 0 {
        return Ok(vec![]);
    }
    let nmat = |a: usize, b: usize| -> Mat<D> {
        if a > l || b > l {
            return mat_zero(dom, n);
        }
        // [u^a v^b](Id - R*(-u)R(-v)) = -(-1)^{a+b} R_a^T R_b for a+b > 0
        let mut m = mat_mul(dom, &mat_transpose::<D>(&r.mats[a]), &r.mats[b]);
        let sign = if (a + b) % 2 == 0 { -1 } else { 1 };
        m = mat_scale(dom, &m, &dom.from_i64(sign));
        m
    };
    // V_{k,0} = N_{k+1,0}; V_{k,b} = N_{k+1,b} - V_{k+1,b-1}
    let top = l - 1;
    let mut v: Vec<Vec<Mat<D>>> = vec![vec![mat_zero(dom, n); top + 1]; top + 1];
    for b in 0..=top {
        for k in (0..=top).rev() {
            let mut m = nmat(k + 1, b);
            if b >= 1 {
                let prev = if k + 1 <= top {
                    v[k + 1][b - 1].clone()
                } else {
                    mat_zero(dom, n)
                };
                m = mat_sub(dom, &m, &prev);
            }
            v[k][b] = m;
        }
        // divisibility: N_{0,b+1} must equal V_{0,b}
        let check = mat_sub(dom, &nmat(0, b + 1), &v[0][b]);
        if !mat_is_zero(dom, &check) {
            return Err(Error::Consistency(
                "V-matrix division failed: symplectic condition broken upstream".into(),
            ));
        }
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Stable-graph-sum oracle
// ---------------------------------------------------------------------------

/// Hard cap: bounded stable-graph enumeration at these targets only.
pub const GRAPH_SUM_TARGETS: [(u32, u32); 4] = [(0, 3), (0, 4), (1, 1), (1, 2)];

struct GraphSpec {
    /// (genus, attached target slots) per vertex.
    vertices: Vec<(u32, Vec<usize>)>,
    /// Edges as vertex pairs (self-loops allowed).
    edges: Vec<(usize, usize)>,
    aut: u64,
}

fn graphs_for(g: u32, n: u32) -> Vec<GraphSpec> {
    match (g, n) {
        (0, 3) => vec![GraphSpec {
            vertices: vec![(0, vec![0, 1, 2])],
            edges: vec![],
            aut: 1,
        }],
        (0, 4) => {
            let mut out = vec![GraphSpec {
                vertices: vec![(0, vec![0, 1, 2, 3])],
                edges: vec![],
                aut: 1,
            }];
            for split in [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]] {
                out.push(GraphSpec {
                    vertices: vec![
                        (0, vec![split[0], split[1]]),
                        (0, vec![split[2], split[3]]),
                    ],
                    edges: vec![(0, 1)],
                    aut: 1,
                });
            }
            out
        }
        (1, 1) => vec![
            GraphSpec {
                vertices: vec![(1, vec![0])],
                edges: vec![],
                aut: 1,
            },
            GraphSpec {
                vertices: vec![(0, vec![0])],
                edges: vec![(0, 0)],
                aut: 2,
            },
        ],
        (1, 2) => vec![
            GraphSpec {
                vertices: vec![(1, vec![0, 1])],
                edges: vec![],
                aut: 1,
            },
            GraphSpec {
                vertices: vec![(0, vec![0, 1])],
                edges: vec![(0, 0)],
                aut: 2,
            },
            GraphSpec {
                vertices: vec![(1, vec![]), (0, vec![0, 1])],
                edges: vec![(0, 1)],
                aut: 1,
            },
            GraphSpec {
                // two rational vertices joined by a double edge
                vertices: vec![(0, vec![0]), (0, vec![1])],
                edges: vec![(0, 1), (0, 1)],
                aut: 2,
            },
            GraphSpec {
                // rational vertex with a loop, bridged to the leg vertex
                vertices: vec![(0, vec![]), (0, vec![0, 1])],
                edges: vec![(0, 0), (0, 1)],
                aut: 2,
            },
        ],
        _ => vec![],
    }
}

/// Inputs of the graph sum.
pub struct GraphSumData<D: Domain> {
    pub dom: D,
    /// Delta_beta^{1/2} = 1/a_0^beta (branch-consistent with the charts).
    pub sqrt_delta: Vect<D>,
    pub r_inv: Vec<Mat<D>>,
    pub v: Vec<Vec<Mat<D>>>,
    /// Dilaton-type leaf series: leaf[a][beta], a >= 2.
    pub leaf: Vec<Vect<D>>,
    pub kw: KwOracle,
}

pub fn graph_sum_data<D: Domain>(
    geo: &LocalGeometry<D>,
    cal: &Calibration<D>,
) -> Result<GraphSumData<D>> {
    let dom = geo.dom.clone();
    let n = geo.n_crit();
    let r_inv = cal.r.inverse(&dom);
    let v = v_matrix(&dom, &cal.r)?;
    let mut sqrt_delta = vec![dom.zero(); n];
    for (b, chart) in geo.charts.iter().enumerate() {
        sqrt_delta[b] = dom.inv(&chart.delta_inv_sqrt)?;
    }
    // leaf(u) = u 1bar - R^{-1}(u)(u 1bar + vtilde(u)), vtilde = sum_{j>=2} v_{j-1} u^j
    let order = cal.r.order();
    let mut leaf = vec![vec![dom.zero(); n]; order + 2];
    for (a, la) in leaf.iter_mut().enumerate() {
        if a < 2 {
            continue;
        }
        for (beta, lab) in la.iter_mut().enumerate() {
            let mut acc = dom.zero();
            if a >= 1 && a - 1 <= order {
                for gamma in 0..n {
                    acc = dom.add(&acc, &r_inv[a - 1][beta][gamma]);
                }
            }
            for j in 2..=a {
                if a - j > order || j - 1 >= cal.v.len() {
                    continue;
                }
                for gamma in 0..n {
                    acc = dom.add(
                        &acc,
                        &dom.mul(&r_inv[a - j][beta][gamma], &cal.v[j - 1][gamma]),
                    );
                }
            }
            *lab = dom.neg(&acc);
        }
    }
    Ok(GraphSumData {
        dom,
        sqrt_delta,
        r_inv,
        v,
        leaf,
        kw: KwOracle::new(),
    })
}

impl<D: Domain> GraphSumData<D> {
    /// Vertex factor at color gamma with attached half-edge powers, summed
    /// over dilaton-type leaves (each of power >= 2), scaled by
    /// Delta^{(2g-2+valence)/2}.
    fn vertex_value(&self, gv: u32, gamma: usize, powers: &[u64]) -> Result<D::Elem> {
        let dom = &self.dom;
        let base_val = powers.len() as i64;
        let base_sum: i64 = powers.iter().map(|&p| p as i64).sum();
        let mut total = dom.zero();
        let max_leaves = (3 * gv as i64 - 3 + base_val - base_sum).max(0) + 2;
        for m in 0..=(max_leaves as usize) {
            let dim = 3 * gv as i64 - 3 + base_val + m as i64;
            let budget = dim - base_sum;
            if budget < 2 * m as i64 {
                continue;
            }
            if 2 * gv as i64 - 2 + base_val + (m as i64) <= 0 {
                continue;
            }
            let mut leaf_terms: Vec<(Vec<u64>, D::Elem)> = vec![];
            if m == 0 {
                if budget == 0 {
                    leaf_terms.push((vec![], dom.one()));
                }
            } else {
                let one = dom.one();
                self.enumerate_leaves(gamma, m, budget, 2, &mut vec![], &one, &mut leaf_terms);
            }
            for (leaf_powers, coeff) in leaf_terms {
                // symmetry factor: multiset with multiplicities -> 1/prod(mult!)
                let mut sym = BigInt::from(1);
                let mut run = 1i64;
                for w in leaf_powers.windows(2) {
                    if w[0] == w[1] {
                        run += 1;
                        sym *= run;
                    } else {
                        run = 1;
                    }
                }
                let mut ds: Vec<u64> = powers.to_vec();
                ds.extend_from_slice(&leaf_powers);
                let kwv = self.kw.correlator(gv, &ds);
                if kwv == Rat::from(BigInt::from(0)) {
                    continue;
                }
                let val = base_val + m as i64;
                let exp = 2 * gv as i64 - 2 + val;
                let scale = dom.pow_i64(&self.sqrt_delta[gamma], exp)?;
                let mut term = dom.mul(&dom.from_rat(&kwv), &scale);
                term = dom.mul(&term, &coeff);
                let sym_inv = Rat::new(BigInt::from(1), sym);
                term = dom.mul(&term, &dom.from_rat(&sym_inv));
                total = dom.add(&total, &term);
            }
        }
        Ok(total)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_leaves(
        &self,
        gamma: usize,
        m_left: usize,
        budget: i64,
        min_p: u64,
        cur: &mut Vec<u64>,
        coeff: &D::Elem,
        out: &mut Vec<(Vec<u64>, D::Elem)>,
    ) {
        let dom = &self.dom;
        if m_left == 0 {
            if budget == 0 {
                out.push((cur.clone(), coeff.clone()));
            }
            return;
        }
        let max_p = budget - 2 * (m_left as i64 - 1);
        let mut p = min_p.max(2);
        while (p as i64) <= max_p {
            if (p as usize) < self.leaf.len() {
                let lc = &self.leaf[p as usize][gamma];
                if !dom.is_zero(lc) {
                    cur.push(p);
                    let c2 = dom.mul(coeff, lc);
                    self.enumerate_leaves(gamma, m_left - 1, budget - p as i64, p, cur, &c2, out);
                    cur.pop();
                }
            }
            p += 1;
        }
    }

    fn leg_factor(&self, a: u64, gamma: usize, target: Leg) -> D::Elem {
        let dom = &self.dom;
        let k = target.1 as u64;
        if a < k {
            return dom.zero();
        }
        let l = (a - k) as usize;
        if l >= self.r_inv.len() {
            return dom.zero();
        }
        self.r_inv[l][gamma][target.0 as usize].clone()
    }

    fn edge_factor(&self, a: u64, ga: usize, b: u64, gb: usize) -> D::Elem {
        let dom = &self.dom;
        if self.v.is_empty() {
            return dom.zero();
        }
        let top = self.v.len() - 1;
        if a as usize > top || b as usize > top {
            return dom.zero();
        }
        self.v[a as usize][b as usize][ga][gb].clone()
    }
}

/// The graph-sum ancestor tensor at one supported (g, n).
pub fn graph_sum_ancestors<D: Domain>(
    data: &GraphSumData<D>,
    n_crit: usize,
    g: u32,
    n: u32,
) -> Result<OmegaTensor<D>> {
    if !GRAPH_SUM_TARGETS.contains(&(g, n)) {
        return Err(Error::domain(format!(
            "graph sum supports (g,n) in {GRAPH_SUM_TARGETS:?}, got ({g},{n})"
        )));
    }
    let dom = &data.dom;
    let mut tensor = OmegaTensor::new(g, n);
    let k_bound = tensor.k_bound().max(0) as u8;
    for key in crate::tr::sorted_multisets(n_crit as u8, k_bound, n as usize) {
        let mut total = dom.zero();
        for graph in graphs_for(g, n) {
            let v = eval_graph(data, &graph, &key, n_crit)?;
            total = dom.add(&total, &v);
        }
        if !dom.is_zero(&total) {
            tensor.entries.insert(key, total);
        }
    }
    Ok(tensor)
}

fn eval_graph<D: Domain>(
    data: &GraphSumData<D>,
    graph: &GraphSpec,
    key: &[Leg],
    n_crit: usize,
) -> Result<D::Elem> {
    let dom = &data.dom;
    let nv = graph.vertices.len();
    let mut total = dom.zero();
    let mut colors = vec![0usize; nv];
    loop {
        let v = eval_colored(data, graph, key, &colors)?;
        total = dom.add(&total, &v);
        let mut pos = 0;
        loop {
            if pos == nv {
                let aut_inv = Rat::new(BigInt::from(1), BigInt::from(graph.aut));
                return Ok(dom.mul(&total, &dom.from_rat(&aut_inv)));
            }
            colors[pos] += 1;
            if colors[pos] < n_crit {
                break;
            }
            colors[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Clone, Copy)]
enum He {
    Leg(usize),
    EdgeEnd(usize, u8),
}

fn eval_colored<D: Domain>(
    data: &GraphSumData<D>,
    graph: &GraphSpec,
    key: &[Leg],
    colors: &[usize],
) -> Result<D::Elem> {
    let dom = &data.dom;
    let mut hes: Vec<(usize, He)> = vec![];
    for (vi, (_, legs)) in graph.vertices.iter().enumerate() {
        for &l in legs {
            hes.push((vi, He::Leg(l)));
        }
    }
    for (ei, &(v1, v2)) in graph.edges.iter().enumerate() {
        hes.push((v1, He::EdgeEnd(ei, 0)));
        hes.push((v2, He::EdgeEnd(ei, 1)));
    }
    let cap: u64 = 8;
    let nh = hes.len();
    let mut powers = vec![0u64; nh];
    let mut total = dom.zero();
    'outer: loop {
        let mut prod = dom.one();
        let mut ok = true;
        for (hi, &(vi, he)) in hes.iter().enumerate() {
            if let He::Leg(slot) = he {
                let f = data.leg_factor(powers[hi], colors[vi], key[slot]);
                if dom.is_zero(&f) {
                    ok = false;
                    break;
                }
                prod = dom.mul(&prod, &f);
            }
        }
        if ok {
            for (ei, &(v1, v2)) in graph.edges.iter().enumerate() {
                let (mut pa, mut pb) = (0u64, 0u64);
                for (hi, &(_, he)) in hes.iter().enumerate() {
                    if let He::EdgeEnd(e, side) = he {
                        if e == ei {
                            if side == 0 {
                                pa = powers[hi];
                            } else {
                                pb = powers[hi];
                            }
                        }
                    }
                }
                let f = data.edge_factor(pa, colors[v1], pb, colors[v2]);
                if dom.is_zero(&f) {
                    ok = false;
                    break;
                }
                prod = dom.mul(&prod, &f);
            }
        }
        if ok {
            for (vi, (gv, _)) in graph.vertices.iter().enumerate() {
                let mut ps: Vec<u64> = vec![];
                for (hi, &(v, _)) in hes.iter().enumerate() {
                    if v == vi {
                        ps.push(powers[hi]);
                    }
                }
                let vv = data.vertex_value(*gv, colors[vi], &ps)?;
                if dom.is_zero(&vv) {
                    ok = false;
                    break;
                }
                prod = dom.mul(&prod, &vv);
            }
        }
        if ok {
            total = dom.add(&total, &prod);
        }
        let mut pos = 0;
        loop {
            if pos == nh {
                break 'outer;
            }
            powers[pos] += 1;
            if powers[pos] <= cap {
                break;
            }
            powers[pos] = 0;
            pos += 1;
        }
    }
    Ok(total)
}

/// Slotwise basis change from the dxi tensor basis to the dzeta (ancestor)
/// basis: from dxi_j = sum_l (Rinv_l) dzeta_{j-l} applied to every slot of
/// every distinct ordering of each stored key. The re-sorted accumulation
/// reproduces the symmetric tensor exactly.
pub fn xi_to_zeta_basis<D: Domain>(
    dom: &D,
    r: &RMatrix<D>,
    tensor: &OmegaTensor<D>,
) -> OmegaTensor<D> {
    let rinv = r.inverse(dom);
    let dim = r.dim();
    let mut acc: std::collections::BTreeMap<Vec<Leg>, D::Elem> = std::collections::BTreeMap::new();
    for (key, c) in tensor.entries.iter() {
        let mut orderings: Vec<Vec<Leg>> = vec![];
        permute_distinct(key, &mut vec![], &mut vec![false; key.len()], &mut orderings);
        for tau in orderings {
            let mut terms: Vec<(Vec<Leg>, D::Elem)> = vec![(vec![], c.clone())];
            for &(b, j) in tau.iter() {
                let mut next = vec![];
                for l in 0..=(j as usize).min(rinv.len() - 1) {
                    for beta in 0..dim {
                        let w = &rinv[l][b as usize][beta];
                        if dom.is_zero(w) {
                            continue;
                        }
                        for (legs, coeff) in &terms {
                            let mut legs2 = legs.clone();
                            legs2.push((beta as u8, j - l as u8));
                            next.push((legs2, dom.mul(coeff, w)));
                        }
                    }
                }
                terms = next;
            }
            for (legs, coeff) in terms {
                let e = acc.entry(legs).or_insert_with(|| dom.zero());
                *e = dom.add(e, &coeff);
            }
        }
    }
    // acc now holds values on ordered keys; group by sorted representative
    // (and check they agree).
    let mut out = OmegaTensor::new(tensor.g, tensor.n);
    for (legs, v) in acc {
        let mut s = legs.clone();
        s.sort_unstable();
        if s == legs {
            if !dom.is_zero(&v) {
                out.entries.insert(s, v);
            }
        }
    }
    out
}

fn permute_distinct(
    items: &[Leg],
    cur: &mut Vec<Leg>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<Leg>>,
) {
    if cur.len() == items.len() {
        out.push(cur.clone());
        return;
    }
    let mut prev: Option<Leg> = None;
    for i in 0..items.len() {
        if used[i] {
            continue;
        }
        if prev == Some(items[i]) {
            continue;
        }
        prev = Some(items[i]);
        used[i] = true;
        cur.push(items[i]);
        permute_distinct(items, cur, used, out);
        cur.pop();
        used[i] = false;
    }
}

/// Ancestor tensor from the recursion output (dzeta-basis coefficients).
pub fn recursion_ancestors<D: Domain>(
    dom: &D,
    r: &RMatrix<D>,
    tensors: &TensorSet<D>,
    g: u32,
    n: u32,
) -> Result<OmegaTensor<D>> {
    let t = tensors
        .get(&(g, n))
        .ok_or_else(|| Error::domain(format!("tensor ({g},{n}) not computed")))?;
    Ok(xi_to_zeta_basis(dom, r, t))
}

/// Homogeneity check [R_{m+1}, E0*] = (m + mu) R_m entrywise, with E0* and
/// mu supplied as matrices in the same basis as R. Returns the defects.
pub fn euler_defect<D: Domain>(
    dom: &D,
    r: &RMatrix<D>,
    e0_star: &Mat<D>,
    mu: &Mat<D>,
) -> Vec<Mat<D>> {
    let mut out = vec![];
    for m in 0..r.order() {
        let comm = mat_sub(
            dom,
            &mat_mul(dom, &r.mats[m + 1], e0_star),
            &mat_mul(dom, e0_star, &r.mats[m + 1]),
        );
        let rhs = mat_add(
            dom,
            &mat_scale(dom, &r.mats[m], &dom.from_i64(m as i64)),
            &mat_mul(dom, mu, &r.mats[m]),
        );
        out.push(mat_sub(dom, &comm, &rhs));
    }
    out
}

/// Vacuum homogeneity (mu + delta/2 + m) v_m = -E0 * v_{m+1}; defects.
pub fn vacuum_euler_defect<D: Domain>(
    dom: &D,
    cal: &Calibration<D>,
    e0_star: &Mat<D>,
    mu: &Mat<D>,
    delta_half: &D::Elem,
) -> Vec<Vect<D>> {
    let n = cal.r.dim();
    let mut out = vec![];
    for m in 0..cal.v.len() - 1 {
        let mut lhs = vec![dom.zero(); n];
        for (i, l) in lhs.iter_mut().enumerate() {
            let mut acc = dom.mul(
                &dom.add(delta_half, &dom.from_i64(m as i64)),
                &cal.v[m][i],
            );
            for j in 0..n {
                acc = dom.add(&acc, &dom.mul(&mu[i][j], &cal.v[m][j]));
            }
            *l = acc;
        }
        let mut rhs = vec![dom.zero(); n];
        for (i, rr) in rhs.iter_mut().enumerate() {
            for j in 0..n {
                *rr = dom.sub(rr, &dom.mul(&e0_star[i][j], &cal.v[m + 1][j]));
            }
        }
        out.push(
            lhs.iter()
                .zip(&rhs)
                .map(|(a, b)| dom.sub(a, b))
                .collect(),
        );
    }
    out
}
