//! Exact genus-0 spectral curves: x a polynomial of the global coordinate z
//! (so dx has its single pole at z = infinity, the boundary), y a rational
//! function regular and non-critical at every zero of dx.

use super::biseries::BiTaylor;
use super::geometry::{
    boundary_pairing_from_bergman, AiryChart, BoundaryData, LocalGeometry,
};
use super::ratfn::RatZ;
use crate::error::{Error, Result};
use crate::scalar::{poly, Domain, Series};

/// Construction input. Branch data must be supplied explicitly: exact
/// domains have no canonical square roots.
#[derive(Clone, Debug)]
pub struct RationalCurveSpec<D: Domain> {
    pub dom: D,
    /// x(z) as a polynomial, low -> high, degree >= 2.
    pub x: Vec<D::Elem>,
    /// y(z) = y_num/y_den.
    pub y_num: Vec<D::Elem>,
    pub y_den: Vec<D::Elem>,
    /// Critical points. Required when deg x' > 1; may be empty for linear x'.
    pub crit_hints: Vec<D::Elem>,
    /// Per-critical-point branch b with b^2 = x''(z_crit).
    pub eta_branches: Vec<D::Elem>,
    /// Boundary relation x = boundary_coeff * lambda^boundary_r.
    pub boundary_coeff: D::Elem,
    pub boundary_r: u32,
    /// Branch b with b^r * boundary_coeff = leading coefficient of x.
    pub lambda_branch: D::Elem,
}

#[derive(Clone, Debug)]
pub struct RationalCurve<D: Domain> {
    pub dom: D,
    pub x: RatZ<D>,
    pub y: RatZ<D>,
    pub crit: Vec<D::Elem>,
}

impl<D: Domain> RationalCurve<D> {
    /// Locate and validate the zeros of dx away from the boundary.
    /// Exact mode: degree-1 derivative factors are solved directly; higher
    /// degrees require hints (roots in the configured domain), each verified
    /// and checked simple.
    pub fn find_critical_points(
        dom: &D,
        x: &[D::Elem],
        hints: &[D::Elem],
    ) -> Result<Vec<D::Elem>> {
        let dx = poly::derivative(dom, x);
        let ddx = poly::derivative(dom, &dx);
        if dx.is_empty() {
            return Err(Error::config("x is constant; dx has no zeros"));
        }
        // all zeros simple <=> gcd(x', x'') trivial
        let g = poly::gcd(dom, &dx, &ddx)?;
        if poly::deg::<D>(&g) != Some(0) {
            return Err(Error::domain(
                "dx has a non-simple zero (gcd(x', x'') is non-constant)",
            ));
        }
        let deg = poly::deg::<D>(&dx).unwrap();
        let roots: Vec<D::Elem> = if deg == 1 {
            vec![dom.neg(&dom.div(&dx[0], &dx[1])?)]
        } else {
            if hints.len() != deg {
                return Err(Error::config(format!(
                    "x' has degree {deg}; supply exactly {deg} critical-point hints in the scalar domain"
                )));
            }
            hints.to_vec()
        };
        for (i, r) in roots.iter().enumerate() {
            if !dom.is_zero(&poly::eval(dom, &dx, r)) {
                return Err(Error::config(format!(
                    "hinted critical point #{i} is not a zero of dx"
                )));
            }
            if dom.is_zero(&poly::eval(dom, &ddx, r)) {
                return Err(Error::domain(format!(
                    "critical point #{i} is not simple"
                )));
            }
            for s in roots.iter().skip(i + 1) {
                if dom.is_zero(&dom.sub(r, s)) {
                    return Err(Error::config("duplicate critical points"));
                }
            }
        }
        Ok(roots)
    }

    /// z_crit together with the critical values x(z_crit).
    pub fn critical_values(&self) -> Result<Vec<(D::Elem, D::Elem)>> {
        self.crit
            .iter()
            .map(|z| Ok((z.clone(), self.x.eval(z)?)))
            .collect()
    }

    /// The global form dxi_k attached to critical point beta, as the
    /// rational function f with dxi = f dz. It is minus the order-(2k+2)
    /// principal part of (2k-1)!!/eta^{2k+1} paired against the Bergman
    /// kernel, i.e. a pure polynomial in 1/(z - z_beta) with no residue.
    pub fn dxi_global(&self, chart: &AiryChart<D>, k: i64) -> Result<RatZ<D>> {
        let dom = &self.dom;
        // 1/eta(w)^{2k+1} as a Laurent series in w = z - z_beta
        let pw = chart.eta_of_z.clone().pow_i64(-(2 * k + 1))?;
        let dfac = crate::scalar::double_factorial_odd(dom, k);
        // numerator polynomial in w: sum_m (-c_{-m} * m) w^{2k+1-m}
        let mut num_w = vec![dom.zero(); (2 * k + 2) as usize];
        for m in 1..=(2 * k + 1) {
            let c = dom.mul(&pw.coeff(-m)?, &dfac);
            let idx = (2 * k + 1 - m) as usize;
            num_w[idx] = dom.neg(&dom.mul(&c, &dom.from_i64(m)));
        }
        // shift back to z: p(z - z_beta)
        let num = poly::taylor_shift(dom, &poly::normalize(dom, num_w), &dom.neg(&chart.z_crit));
        // denominator (z - z_beta)^{2k+2}
        let lin = vec![dom.neg(&chart.z_crit), dom.one()];
        let mut den = vec![dom.one()];
        for _ in 0..(2 * k + 2) {
            den = poly::mul(dom, &den, &lin);
        }
        RatZ::new(dom.clone(), num, den)
    }

    /// d zeta_k = (-d o 1/dx)^k dxi_0 for one critical point, globally.
    pub fn dzeta_global(&self, chart: &AiryChart<D>, k_max: i64) -> Result<Vec<RatZ<D>>> {
        let dx = self.x.derivative();
        let mut out = Vec::with_capacity(k_max as usize + 1);
        let mut cur = self.dxi_global(chart, 0)?;
        out.push(cur.clone());
        for _ in 1..=k_max {
            cur = cur.div(&dx)?.derivative().neg();
            out.push(cur.clone());
        }
        Ok(out)
    }
}

/// The (0,2) boundary data for a genus-0 curve in the coordinate w = 1/z:
/// the Bergman kernel transforms to dw1 dw2/(w1 - w2)^2, so the regular
/// part of B minus the boundary double pole is
///     [1 - M(w1)M(w2)/K(w1,w2)^2] / (w1 - w2)^2
/// with lambda = (1/w) L(w), M = L - w L', and
/// w2 L(w1) - w1 L(w2) = -(w1 - w2) K.
pub fn boundary_q_data<D: Domain>(
    dom: &D,
    boundary: &BoundaryData<D>,
    jmax: i64,
) -> Result<(Vec<Vec<D::Elem>>, BiTaylor<D>)> {
    let nq = (2 * jmax + 2) as usize;
    let lam = &boundary.lambda_in_w;
    let l_series = lam.shift(1);
    let m_series = {
        let lp = l_series.derivative().shift(1);
        l_series.sub(&lp)
    };
    let lu = BiTaylor::from_u_series(dom, nq + 2, &l_series);
    let lv = BiTaylor::from_v_series(dom, nq + 2, &l_series);
    let mut vu = BiTaylor::zero(dom.clone(), nq + 2);
    vu.c[1][0] = dom.one();
    let mut vv = BiTaylor::zero(dom.clone(), nq + 2);
    vv.c[0][1] = dom.one();
    let n_biv = lu.mul(&vv).sub(&vu.mul(&lv));
    let k_biv = n_biv.neg().div_u_minus_v()?;
    let mu = BiTaylor::from_u_series(dom, nq + 2, &m_series);
    let mv = BiTaylor::from_v_series(dom, nq + 2, &m_series);
    let t = k_biv.mul(&k_biv).sub(&mu.mul(&mv));
    let t2 = t.div_u_minus_v()?.div_u_minus_v()?;
    let reg = t2.mul(&k_biv.mul(&k_biv).invert()?);
    let q = boundary_pairing_from_bergman(dom, boundary, &reg, jmax)?;
    Ok((q, reg))
}

/// Orders for building the local geometry.
#[derive(Clone, Copy, Debug)]
pub struct BuildOrders {
    /// Certified eta window at critical points.
    pub airy: i64,
    /// Number of boundary basis forms d(lambda^{-j}), j <= jmax.
    pub jmax: i64,
    /// Largest k for which dxi_k boundary data is prepared.
    pub kmax_forms: i64,
}

pub fn build_rational_geometry<D: Domain>(
    spec: &RationalCurveSpec<D>,
    orders: BuildOrders,
) -> Result<(RationalCurve<D>, LocalGeometry<D>)> {
    let dom = spec.dom.clone();
    let x_poly = poly::normalize(&dom, spec.x.clone());
    let degx = poly::deg::<D>(&x_poly)
        .ok_or_else(|| Error::config("x must be a nonzero polynomial"))?;
    if degx < 2 {
        return Err(Error::config("x must have degree >= 2"));
    }
    if degx != spec.boundary_r as usize {
        return Err(Error::config(
            "boundary relation degree must match deg x (one boundary at infinity)",
        ));
    }
    let x = RatZ::from_poly(dom.clone(), x_poly.clone());
    let y = RatZ::new(dom.clone(), spec.y_num.clone(), spec.y_den.clone())?;
    let crit = RationalCurve::find_critical_points(&dom, &x_poly, &spec.crit_hints)?;
    if spec.eta_branches.len() != crit.len() {
        return Err(Error::config(format!(
            "need {} eta branches, got {}",
            crit.len(),
            spec.eta_branches.len()
        )));
    }
    let curve = RationalCurve {
        dom: dom.clone(),
        x,
        y,
        crit,
    };

    // ---- Airy charts ----
    let n_loc = orders.airy;
    let mut charts = Vec::with_capacity(curve.crit.len());
    for (bi, zb) in curve.crit.iter().enumerate() {
        let xb = curve.x.eval(zb)?;
        // 2(x(z_b + w) - x_b) as a series in w, exact
        let shifted = poly::taylor_shift(&dom, &x_poly, zb);
        let mut s2 = Series::new(dom.clone(), 0, shifted).extended(2 * n_loc + 4);
        s2.add_term(0, dom.neg(&xb));
        let s2 = s2.scale(&dom.from_i64(2));
        let eta_of_z = s2.sqrt_with_branch(&spec.eta_branches[bi])?;
        if eta_of_z.order() != Some(1) {
            return Err(Error::domain("eta(z) must have order exactly 1"));
        }
        let z_of_eta = eta_of_z.clone().truncate(n_loc + 2).invert_composition()?;
        // dy(z_b) != 0 and y regular there
        let dy = curve.y.derivative().eval(zb)?;
        if dom.is_zero(&dy) {
            return Err(Error::domain("dy vanishes at a critical point"));
        }
        let y_local = curve.y.expand_at(zb, n_loc + 2)?;
        let y_in_eta = y_local.compose(&z_of_eta)?;
        let y_odd = y_in_eta.parity_part(false);
        let delta_inv_sqrt = y_odd.coeff(1)?;
        if dom.is_zero(&delta_inv_sqrt) {
            return Err(Error::domain("vanishing leading odd coefficient of y"));
        }
        charts.push(AiryChart {
            z_crit: zb.clone(),
            x_crit: xb,
            z_of_eta,
            eta_of_z,
            y_in_eta,
            y_odd,
            delta_inv_sqrt,
        });
    }

    // ---- Bergman cross-expansions ----
    let nb = (2 * orders.kmax_forms + n_loc) as usize;
    let nc = charts.len();
    let mut b_reg: Vec<Vec<BiTaylor<D>>> = Vec::with_capacity(nc);
    for a in 0..nc {
        let ua = &charts[a].z_of_eta;
        let dua = ua.derivative();
        let mut row = Vec::with_capacity(nc);
        for b in 0..nc {
            let ub = &charts[b].z_of_eta;
            let dub = ub.derivative();
            let fu = BiTaylor::from_u_series(&dom, nb + 2, &dua);
            let fv = BiTaylor::from_v_series(&dom, nb + 2, &dub);
            let t = if a == b {
                // [u'(e1)u'(e2)/g^2 - 1]/(e1-e2)^2 with g = (u(e1)-u(e2))/(e1-e2)
                let g = BiTaylor::divided_difference(&dom, nb + 2, ua);
                let g2inv = g.mul(&g).invert()?;
                let num = fu
                    .mul(&fv)
                    .mul(&g2inv)
                    .sub(&BiTaylor::constant(dom.clone(), nb + 2, dom.one()));
                num.div_u_minus_v()?.div_u_minus_v()?
            } else {
                // u'(e1)u'(e2)/(c + u_a(e1) - u_b(e2))^2
                let c = dom.sub(&charts[a].z_crit, &charts[b].z_crit);
                let mut h = BiTaylor::from_u_series(&dom, nb + 2, ua)
                    .sub(&BiTaylor::from_v_series(&dom, nb + 2, ub));
                h.c[0][0] = dom.add(&h.c[0][0], &c);
                fu.mul(&fv).mul(&h.mul(&h).invert()?)
            };
            row.push(t);
        }
        b_reg.push(row);
    }

    // ---- Boundary chart ----
    let wpad = 4i64;
    let w_hi = 2 * orders.jmax + wpad;
    let x_in_w = curve.x.expand_at_infinity(w_hi)?;
    let r = spec.boundary_r;
    let c_inv = dom.inv(&spec.boundary_coeff)?;
    let lambda_in_w = x_in_w
        .scale(&c_inv)
        .nth_root_with_branch(r, &spec.lambda_branch)?;
    if lambda_in_w.order() != Some(-1) {
        return Err(Error::domain("lambda must have a simple pole in w = 1/z"));
    }
    let mut x_lambda = vec![dom.zero(); r as usize + 1];
    x_lambda[r as usize] = spec.boundary_coeff.clone();
    // certify x(z) == boundary_coeff * lambda^r within the window
    {
        let lr = lambda_in_w.clone().pow_i64(r as i64)?;
        let diff = x_in_w.sub(&lr.scale(&spec.boundary_coeff));
        if !diff.is_zero_series() {
            return Err(Error::Consistency(
                "boundary relation x = c*lambda^r fails within the certified window".into(),
            ));
        }
    }
    let boundary = BoundaryData::build(
        &dom,
        lambda_in_w,
        x_lambda,
        x_in_w,
        orders.jmax,
    )?;

    // ---- boundary expansions of dxi_k ----
    let mut dxi_boundary = Vec::with_capacity(nc);
    let mut dxi_bnd_w = Vec::with_capacity(nc);
    for chart in charts.iter() {
        let mut per_k = Vec::with_capacity(orders.kmax_forms as usize + 1);
        let mut per_k_w = Vec::with_capacity(orders.kmax_forms as usize + 1);
        for k in 0..=orders.kmax_forms {
            let form = curve.dxi_global(chart, k)?;
            let f_inf = form.expand_at_infinity(orders.jmax + wpad)?;
            // f(z) dz = -f(1/w)/w^2 dw
            let g = f_inf.shift(-2).neg();
            per_k.push(boundary.to_dlambda(&dom, &g)?);
            per_k_w.push(g);
        }
        dxi_boundary.push(per_k);
        dxi_bnd_w.push(per_k_w);
    }

    // ---- boundary pairing (the (0,2) q-matrix) ----
    let (q_matrix, q_reg) = boundary_q_data(&dom, &boundary, orders.jmax)?;

    let geo = LocalGeometry {
        dom,
        charts,
        b_reg,
        order: n_loc,
        boundary,
        dxi_boundary,
        kmax_forms: orders.kmax_forms,
        dxi_bnd_w,
        q_matrix,
        q_reg,
    };
    Ok((curve, geo))
}
