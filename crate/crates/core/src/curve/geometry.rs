//! Local curve data consumed by the recursion engine: Airy charts at
//! critical points, Bergman-kernel cross expansions, the boundary chart, and
//! the boundary expansions of the preferred 1-form basis.
//!
//! Both backends (exact rational genus-0 curves and the numeric Weierstrass
//! curve) produce this same structure, so everything downstream is agnostic
//! to how the curve was presented.

use super::biseries::BiTaylor;
use crate::error::{Error, Result};
use crate::scalar::{double_factorial_odd, Domain, Series};

/// Local Airy chart at one critical point: x(z(eta)) = x_crit + eta^2/2.
#[derive(Clone, Debug)]
pub struct AiryChart<D: Domain> {
    pub z_crit: D::Elem,
    pub x_crit: D::Elem,
    /// u(eta) = z - z_crit as a series in eta (order exactly 1).
    pub z_of_eta: Series<D>,
    /// eta as a series in w = z - z_crit (order exactly 1).
    pub eta_of_z: Series<D>,
    /// y(z(eta)) as a series in eta.
    pub y_in_eta: Series<D>,
    /// Odd part of y(z(eta)).
    pub y_odd: Series<D>,
    /// Leading coefficient of y_odd = y'(z_crit)/sqrt(x''(z_crit)).
    pub delta_inv_sqrt: D::Elem,
}

/// Boundary chart: the local coordinate lambda with lambda(b) = infinity and
/// x an exact polynomial in lambda.
#[derive(Clone, Debug)]
pub struct BoundaryData<D: Domain> {
    /// Coefficients of x as a polynomial of lambda (low -> high).
    pub x_lambda: Vec<D::Elem>,
    /// lambda as a Laurent series in the boundary coordinate w (order -1).
    pub lambda_in_w: Series<D>,
    /// x as a Laurent series in w.
    pub x_in_w: Series<D>,
    /// basis[j-1] = d(lambda^{-j})/dw as a series in w, for j = 1..=jmax.
    pub basis: Vec<Series<D>>,
    pub jmax: i64,
}

impl<D: Domain> BoundaryData<D> {
    /// Build the d(lambda^{-j})/dw basis from lambda(w).
    pub fn build(
        dom: &D,
        lambda_in_w: Series<D>,
        x_lambda: Vec<D::Elem>,
        x_in_w: Series<D>,
        jmax: i64,
    ) -> Result<Self> {
        let lam_inv = lambda_in_w.invert()?;
        let mut basis = Vec::with_capacity(jmax as usize);
        let mut pw = lam_inv.clone();
        for _ in 1..=jmax {
            basis.push(pw.derivative());
            pw = pw.mul(&lam_inv);
        }
        let _ = dom;
        Ok(BoundaryData {
            x_lambda,
            lambda_in_w,
            x_in_w,
            basis,
            jmax,
        })
    }

    /// Express a 1-form f(w) dw regular at the boundary in the basis
    /// d(lambda^{-j}); returns coefficients c_j for j = 1..=jmax.
    /// Errors if the form has a pole or residue at the boundary.
    pub fn to_dlambda(&self, dom: &D, f: &Series<D>) -> Result<Vec<D::Elem>> {
        if let Some(ord) = f.order() {
            if ord < 0 {
                return Err(Error::domain(format!(
                    "form has a pole of order {} at the boundary",
                    -ord
                )));
            }
        }
        let mut residual = f.clone();
        let mut out = Vec::with_capacity(self.jmax as usize);
        for j in 1..=self.jmax {
            let b = &self.basis[(j - 1) as usize];
            let lead = b.coeff(j - 1)?;
            let c = dom.div(&residual.coeff(j - 1)?, &lead)?;
            residual = residual.sub(&b.scale(&c));
            out.push(c);
        }
        Ok(out)
    }
}

/// Everything the recursion needs, expressed in local coordinates.
#[derive(Clone, Debug)]
pub struct LocalGeometry<D: Domain> {
    pub dom: D,
    pub charts: Vec<AiryChart<D>>,
    /// b_reg[alpha][beta]: regular part of B(z1, z2) in (eta_alpha, eta_beta);
    /// the diagonal singular part d eta1 d eta2/(eta1-eta2)^2 is implicit for
    /// alpha == beta.
    pub b_reg: Vec<Vec<BiTaylor<D>>>,
    /// Certified eta window for local series (poles tracked to -order..order).
    pub order: i64,
    pub boundary: BoundaryData<D>,
    /// dxi_boundary[beta][k][j-1]: coefficient of d(lambda^{-j}) in the
    /// boundary expansion of the k-th basis form at critical point beta.
    pub dxi_boundary: Vec<Vec<Vec<D::Elem>>>,
    /// Largest k prepared in dxi_boundary.
    pub kmax_forms: i64,
    /// dxi_bnd_w[beta][k]: the same boundary expansions as raw coefficient
    /// series in the boundary coordinate (coefficient of dw).
    pub dxi_bnd_w: Vec<Vec<Series<D>>>,
    /// q[k-1][l-1] = the (0,2) boundary pairing <alpha_k, alpha_l>.
    pub q_matrix: Vec<Vec<D::Elem>>,
    /// Regular part of omega_{0,2} minus the boundary double pole, as a
    /// bivariate Taylor series in the two boundary coordinates.
    pub q_reg: super::biseries::BiTaylor<D>,
}

impl<D: Domain> LocalGeometry<D> {
    pub fn n_crit(&self) -> usize {
        self.charts.len()
    }

    /// Full local expansion (coefficient of d eta_at) of the k-th basis form
    /// attached to critical point `label` , evaluated near critical point
    /// `at`: singular part -(2k+1)!!/eta^{2k+2} when label == at, plus the
    /// regular part -(2k-1)!! * sum_m B[label][at]_{2k, m} eta^m.
    pub fn dxi_local(&self, label: usize, k: i64, at: usize) -> Result<Series<D>> {
        let dom = &self.dom;
        let b = &self.b_reg[label][at];
        let row = 2 * k as usize;
        if row > b.n {
            return Err(Error::truncation(format!(
                "dxi_{k} local expansion needs Bergman row {row}, window is {}",
                b.n
            )));
        }
        let mut s = Series::zero(dom.clone(), (b.n - row) as i64);
        let df = double_factorial_odd(dom, k); // (2k-1)!!
        for m in 0..=(b.n - row) {
            let c = b.coeff(row, m)?;
            s.add_term(m as i64, dom.neg(&dom.mul(&df, &c)));
        }
        if label == at {
            let df1 = double_factorial_odd(dom, k + 1); // (2k+1)!!
            s.add_term(-2 * k - 2, dom.neg(&df1));
        }
        Ok(s)
    }

    /// The coefficient of d eta^2 in omega_{0,2}(z, zbar) near critical
    /// point beta: -[1/(4 eta^2) + sum_{k,l} B_{kl} (-1)^l eta^{k+l}].
    pub fn two_point_self(&self, beta: usize) -> Result<Series<D>> {
        let dom = &self.dom;
        let b = &self.b_reg[beta][beta];
        let mut s = Series::zero(dom.clone(), b.n as i64);
        let quarter = dom.div(&dom.one(), &dom.from_i64(-4))?;
        s.add_term(-2, quarter);
        for k in 0..=b.n {
            for l in 0..=(b.n - k) {
                let c = b.coeff(k, l)?;
                if dom.is_zero(&c) {
                    continue;
                }
                let sgn = if l % 2 == 1 { dom.neg(&c) } else { c };
                s.add_term((k + l) as i64, dom.neg(&sgn));
            }
        }
        Ok(s)
    }

    /// Boundary expansion coefficients of the k-th form at beta.
    pub fn dxi_boundary_coeffs(&self, beta: usize, k: i64) -> Result<&[D::Elem]> {
        self.dxi_boundary
            .get(beta)
            .and_then(|v| v.get(k as usize))
            .map(|v| v.as_slice())
            .ok_or_else(|| {
                Error::truncation(format!(
                    "boundary expansion of form k={k} at beta={beta} not prepared (kmax={})",
                    self.kmax_forms
                ))
            })
    }
}

/// Shared boundary-pairing extraction: given the regular part of
/// B(z1,z2) - d lambda1 d lambda2/(lambda1-lambda2)^2 at the boundary as a
/// bivariate Taylor series in (w1, w2), solve for the matrix
/// q[k-1][l-1] = <alpha_k, alpha_l>_{0,2} with
/// B - dbl = sum q_{kl}/(k l) * d(lambda^{-k}) d(lambda^{-l}).
///
/// By the expansion convention, B - dbl = sum_{k,l} Qp_{kl} beta_k(w1)
/// beta_l(w2) dw1 dw2 with Qp_{kl} = <alpha_k,alpha_l>/(kl).
pub fn boundary_pairing_from_bergman<D: Domain>(
    dom: &D,
    boundary: &BoundaryData<D>,
    reg: &BiTaylor<D>,
    jmax: i64,
) -> Result<Vec<Vec<D::Elem>>> {
    // R_{ij} = sum_{k <= i+1, l <= j+1} Qp_{kl} b^k_i b^l_j with
    // b^k = basis[k-1] (leading order k-1), so the system is triangular and
    // solvable entrywise in increasing (k, l).
    let jm = jmax as usize;
    let basis_coeff = |k: usize, i: usize| -> Result<D::Elem> {
        boundary.basis[k - 1].coeff(i as i64)
    };
    let mut qp = vec![vec![dom.zero(); jm]; jm];
    for k in 1..=jm {
        for l in 1..=jm {
            let mut acc = reg.coeff(k - 1, l - 1)?;
            for kp in 1..=k {
                for lp in 1..=l {
                    if kp == k && lp == l {
                        continue;
                    }
                    let t = dom.mul(
                        &qp[kp - 1][lp - 1],
                        &dom.mul(&basis_coeff(kp, k - 1)?, &basis_coeff(lp, l - 1)?),
                    );
                    acc = dom.sub(&acc, &t);
                }
            }
            let denom = dom.mul(&basis_coeff(k, k - 1)?, &basis_coeff(l, l - 1)?);
            qp[k - 1][l - 1] = dom.div(&acc, &denom)?;
        }
    }
    // q_{kl} = k*l*Qp_{kl}
    let mut q = vec![vec![dom.zero(); jm]; jm];
    for k in 1..=jm {
        for l in 1..=jm {
            q[k - 1][l - 1] = dom.mul(&qp[k - 1][l - 1], &dom.from_i64((k * l) as i64));
        }
    }
    Ok(q)
}
