//! The bilinear residue check in doubled variables.
//!
//! With Z = exp(L(p)) * exp(Q(p,p)/2), write u for the times of the first
//! vertex-dressed factor and v for the second. The product splits as
//!   e^{(Q(u,u)+Q(v,v))/2} * e^{Q(L,L) - Q(u,L) + Q(v,L)} * A(u-L) * A(v+L)
//! where L stands for the sequence lambda^{-k} substituted into the time
//! slots. Keeping u and v separate until the very end keeps every
//! intermediate object small; the residual is transformed to the physical
//! doubled variables q = (u+v)/2, q' = (u-v)/2 only when reporting, where
//! the trust grading lives.

use crate::lam::{max_time_index, q_var, qp_var, qp_weight, LamCaps, LamPoly};
use crate::report::{HqeCoefficient, HqeReport};
use trtau_core::error::Result;
use trtau_core::scalar::{Caps, Domain, Mono, MultiPoly};

/// How "trusted" is decided for a checked coefficient.
#[derive(Clone, Copy, Debug)]
pub enum TrustMode {
    /// Correlator window: hbar grade <= c, every contributing time index
    /// (target indices and absorbed shifts) <= k.
    Window { c: u32, k: u32 },
    /// Fixture mode: the input polynomial is exact up to total degree
    /// d_store, so a coefficient is trusted when its full contribution
    /// budget fits under that degree.
    DegreeBudget { d_store: u32 },
}

#[derive(Clone, Debug)]
pub struct HqeOptions<D: Domain> {
    /// Total degree of reported monomials.
    pub d_report: u32,
    /// hbar cap of reported monomials.
    pub h_report: u32,
    /// q'-weight cap of reported monomials (and of the multiplier depth).
    pub j_cap: u64,
    /// Boundary polynomial coefficients (low -> high) for the reduced
    /// families; powers 0..=n_powers are checked.
    pub x_lambda: Vec<D::Elem>,
    pub n_powers: u32,
    /// Zero tolerance for numeric domains.
    pub tol: f64,
}

/// The tau factor fed to the check.
pub enum ZInput<'a, D: Domain> {
    /// log of the stable part; the exponential is taken after substitution.
    LogStable(&'a MultiPoly<D>),
    /// A raw polynomial Z-factor (fixtures).
    Raw(&'a MultiPoly<D>),
}

pub struct HqeOutcome<D: Domain> {
    /// residuals[n] in the doubled variables (q_k = id k, q'_k offset).
    pub residuals: Vec<MultiPoly<D>>,
    pub report: HqeReport,
}

/// Substitute p_j -> w_j + sign * lambda^{-j} into a polynomial, where the
/// target variable family is chosen by `var_of`.
fn substitute<D: Domain>(
    dom: &D,
    input: &MultiPoly<D>,
    caps: LamCaps,
    var_of: impl Fn(u32) -> u32,
    sign_plus: bool,
) -> LamPoly<D> {
    let mut out = LamPoly::zero(dom.clone(), caps);
    let minus_one = dom.from_i64(-1);
    for ((h, m), c) in input.terms.iter() {
        if *h > caps.caps.max_hbar {
            continue;
        }
        let mut terms: Vec<(i64, Mono, D::Elem)> = vec![(0, Mono::one(), c.clone())];
        for &(j, e) in m.0.iter() {
            for _ in 0..e {
                let mut next = vec![];
                for (lam, mono, coeff) in terms.iter() {
                    let m2 = mono.mul(&Mono::var(var_of(j)));
                    if m2.degree() <= caps.caps.max_degree {
                        next.push((*lam, m2, coeff.clone()));
                    }
                    let lam2 = lam - j as i64;
                    if lam2 >= caps.lam_lo {
                        let c2 = if sign_plus {
                            coeff.clone()
                        } else {
                            dom.mul(coeff, &minus_one)
                        };
                        next.push((lam2, mono.clone(), c2));
                    }
                }
                terms = next;
            }
        }
        for (lam, mono, coeff) in terms {
            out.add_term(lam, *h, mono, coeff);
        }
    }
    out
}

/// exp(Q(L,L) - Q(u,L) + Q(v,L)).
fn q_prefactor<D: Domain>(dom: &D, q: &[Vec<D::Elem>], caps: LamCaps) -> Result<LamPoly<D>> {
    let mut logp = LamPoly::zero(dom.clone(), caps);
    let jm = q.len() as i64;
    for k in 1..=jm {
        for l in 1..=jm {
            let qkl = &q[(k - 1) as usize][(l - 1) as usize];
            if dom.is_zero(qkl) {
                continue;
            }
            let w = dom.div(qkl, &dom.from_i64(k * l))?;
            // + q_{kl} lam^{-k-l} / (kl)
            logp.add_term(-(k + l), 0, Mono::one(), w.clone());
            // - q_{kl} u_k lam^{-l}/(kl) + q_{kl} v_k lam^{-l}/(kl)
            logp.add_term(-l, 0, Mono::var(q_var(k as u32)), dom.neg(&w));
            logp.add_term(-l, 0, Mono::var(qp_var(k as u32)), w);
        }
    }
    Ok(logp.exp())
}

/// e^{(Q(u,u) + Q(v,v))/2} as a plain polynomial factor.
fn q_diagonal_factor<D: Domain>(dom: &D, q: &[Vec<D::Elem>], caps: Caps) -> Result<MultiPoly<D>> {
    let mut logp = MultiPoly::zero(dom.clone(), caps);
    let jm = q.len() as i64;
    let half = dom.div(&dom.one(), &dom.from_i64(2))?;
    for k in 1..=jm {
        for l in 1..=jm {
            let qkl = &q[(k - 1) as usize][(l - 1) as usize];
            if dom.is_zero(qkl) {
                continue;
            }
            let w = dom.mul(&dom.div(qkl, &dom.from_i64(k * l))?, &half);
            logp.add_term(
                0,
                Mono::var(q_var(k as u32)).mul(&Mono::var(q_var(l as u32))),
                w.clone(),
            );
            logp.add_term(
                0,
                Mono::var(qp_var(k as u32)).mul(&Mono::var(qp_var(l as u32))),
                w,
            );
        }
    }
    Ok(logp.exp())
}

/// Multiplier exp(sum_k lambda^k (u_k - v_k) / k), positive lambda powers.
fn multiplier<D: Domain>(dom: &D, caps: LamCaps) -> LamPoly<D> {
    let mut logm = LamPoly::zero(dom.clone(), caps);
    let top = caps.lam_hi.max(0);
    for k in 1..=top {
        let w = dom
            .div(&dom.one(), &dom.from_i64(k))
            .expect("k nonzero");
        logm.add_term(k, 0, Mono::var(q_var(k as u32)), w.clone());
        logm.add_term(k, 0, Mono::var(qp_var(k as u32)), dom.neg(&w));
    }
    logm.exp()
}

pub fn hqe_check<D: Domain>(
    dom: &D,
    z: ZInput<'_, D>,
    q: &[Vec<D::Elem>],
    opts: &HqeOptions<D>,
    trust: TrustMode,
) -> Result<HqeOutcome<D>> {
    let x_deg = opts.x_lambda.len().saturating_sub(1) as i64;
    let lam_lo = -(opts.j_cap as i64 + 1 + x_deg * opts.n_powers as i64);
    let caps = LamCaps {
        caps: Caps {
            max_hbar: opts.h_report,
            max_degree: opts.d_report,
        },
        lam_lo,
        lam_hi: -lam_lo,
        qp_weight_max: u64::MAX,
    };
    // the two substituted factors, on disjoint variable families
    let stage = std::time::Instant::now();
    let (a_plus, a_minus) = match z {
        ZInput::LogStable(logp) => {
            let sp = substitute(dom, logp, caps, q_var, false);
            let sm = substitute(dom, logp, caps, qp_var, true);
            if std::env::var_os("TRTAU_HQE_TRACE").is_some() {
                eprintln!("[hqe] substituted log: {} terms", sp.term_count());
            }
            (sp.exp(), sm.exp())
        }
        ZInput::Raw(zp) => (
            substitute(dom, zp, caps, q_var, false),
            substitute(dom, zp, caps, qp_var, true),
        ),
    };
    if std::env::var_os("TRTAU_HQE_TRACE").is_some() {
        eprintln!(
            "[hqe] factors: {:?} ({} + {} terms)",
            stage.elapsed(),
            a_plus.term_count(),
            a_minus.term_count()
        );
    }
    let stage = std::time::Instant::now();
    let pref = q_prefactor(dom, q, caps)?;
    let p_full = pref.mul(&a_plus).mul(&a_minus);
    if std::env::var_os("TRTAU_HQE_TRACE").is_some() {
        eprintln!(
            "[hqe] product: {:?} (pref {} -> p_full {} terms)",
            stage.elapsed(),
            pref.term_count(),
            p_full.term_count()
        );
    }
    let stage = std::time::Instant::now();
    let mult = multiplier(dom, caps);
    let diag = q_diagonal_factor(dom, q, caps.caps)?;
    if std::env::var_os("TRTAU_HQE_TRACE").is_some() {
        eprintln!(
            "[hqe] mult/diag: {:?} ({} / {} terms)",
            stage.elapsed(),
            mult.term_count(),
            diag.terms.len()
        );
    }
    let stage = std::time::Instant::now();

    // powers of the boundary polynomial
    let mut xp: Vec<Vec<D::Elem>> = vec![vec![dom.one()]];
    for n in 1..=opts.n_powers as usize {
        let prev = &xp[n - 1];
        let mut next = vec![dom.zero(); prev.len() + opts.x_lambda.len() - 1];
        for (i, a) in prev.iter().enumerate() {
            for (j, b) in opts.x_lambda.iter().enumerate() {
                next[i + j] = dom.add(&next[i + j], &dom.mul(a, b));
            }
        }
        xp.push(next);
    }

    let mut residuals = vec![];
    let mut coefficients = vec![];
    let mut trusted_failed = 0usize;
    let mut shown = 0usize;
    let mut all_pass = true;
    for (n, xpn) in xp.iter().enumerate() {
        let mut res_uv = MultiPoly::zero(dom.clone(), caps.caps);
        for (i, ci) in xpn.iter().enumerate() {
            if dom.is_zero(ci) {
                continue;
            }
            for (jlam, mpoly) in mult.slices.iter() {
                let target = -1 - (i as i64) - jlam;
                let Some(pslice) = p_full.slice(target) else {
                    continue;
                };
                let prod = mpoly.mul(pslice);
                res_uv = res_uv.add(&prod.scale(ci));
            }
        }
        let res_uv = res_uv.mul(&diag);
        // transform to the doubled variables: u = q + q', v = q - q'
        let res = res_uv.substitute_linear(caps.caps, &|var: u32| {
            let (idx, vfam) = if var >= crate::lam::QP_OFFSET {
                (var - crate::lam::QP_OFFSET, true)
            } else {
                (var, false)
            };
            let qv = (q_var(idx), dom.one());
            let qpv = (
                qp_var(idx),
                if vfam { dom.from_i64(-1) } else { dom.one() },
            );
            vec![qv, qpv]
        });
        for ((h, m), v) in res.terms.iter() {
            let nonzero = match dom.abs_approx(v) {
                None => !dom.is_zero(v),
                Some(a) => a > opts.tol,
            };
            if !nonzero {
                continue;
            }
            // q'-weight cap of the report
            if qp_weight(m) > opts.j_cap {
                continue;
            }
            let trusted = is_trusted(trust, *h, m, (x_deg as u64) * (n as u64));
            if trusted {
                trusted_failed += 1;
                all_pass = false;
            }
            if shown < 64 {
                shown += 1;
                coefficients.push(HqeCoefficient {
                    n: n as u32,
                    hbar: *h,
                    monomial: format_mono(m),
                    value: dom.fmt_elem(v),
                    abs: dom.abs_approx(v),
                    trusted,
                    pass: !trusted,
                });
            }
        }
        residuals.push(res);
    }
    if std::env::var_os("TRTAU_HQE_TRACE").is_some() {
        eprintln!("[hqe] residuals: {:?}", stage.elapsed());
    }
    let report = HqeReport {
        coefficients,
        trusted_failed,
        pass: all_pass,
    };
    Ok(HqeOutcome { residuals, report })
}

pub fn is_trusted(trust: TrustMode, h: u32, m: &Mono, twist_weight: u64) -> bool {
    match trust {
        TrustMode::Window { c, k } => {
            h <= c
                && max_time_index(m) <= k
                && qp_weight(m) + 1 + twist_weight <= k as u64
        }
        TrustMode::DegreeBudget { d_store } => {
            m.degree() as u64 + qp_weight(m) + 1 + twist_weight <= d_store as u64
        }
    }
}

pub fn format_mono(m: &Mono) -> String {
    if m.0.is_empty() {
        return "1".into();
    }
    let mut parts = vec![];
    for &(v, e) in m.0.iter() {
        let name = if v >= crate::lam::QP_OFFSET {
            format!("q'_{}", v - crate::lam::QP_OFFSET)
        } else {
            format!("q_{v}")
        };
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    parts.join(" ")
}

/// Compare two outcomes on trusted coefficients; returns how many differ.
pub fn trusted_diff<D: Domain>(
    dom: &D,
    a: &HqeOutcome<D>,
    b: &HqeOutcome<D>,
    trust: TrustMode,
    x_deg: u64,
    tol: f64,
) -> usize {
    let mut changed = 0;
    for (n, (ra, rb)) in a.residuals.iter().zip(&b.residuals).enumerate() {
        let keys: std::collections::BTreeSet<_> =
            ra.terms.keys().chain(rb.terms.keys()).cloned().collect();
        for (h, m) in keys {
            if !is_trusted(trust, h, &m, x_deg * (n as u64)) {
                continue;
            }
            let diff = dom.sub(&ra.coeff(h, &m), &rb.coeff(h, &m));
            let nz = match dom.abs_approx(&diff) {
                None => !dom.is_zero(&diff),
                Some(x) => x > tol,
            };
            if nz {
                changed += 1;
            }
        }
    }
    changed
}
