//! Bilinear-check fixtures with known verdicts.

use num_bigint::BigInt;
use trtau_core::scalar::{Caps, Domain, Mono, MultiPoly, Rat, Rationals};
use trtau_hirota::lam::{qp_var, LamCaps, LamPoly};
use trtau_hirota::vertex::{hqe_check, HqeOptions, TrustMode, ZInput};

fn qr(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn no_q() -> Vec<Vec<Rat>> {
    vec![vec![qr(0, 1); 8]; 8]
}

fn opts(d: u32, j: u64, n_powers: u32) -> HqeOptions<Rationals> {
    HqeOptions {
        d_report: d,
        h_report: 8,
        j_cap: j,
        x_lambda: vec![qr(0, 1), qr(0, 1), qr(-1, 1)], // -lambda^2
        n_powers,
        tol: 0.0,
    }
}

#[test]
fn trivial_tau_passes() {
    let dom = Rationals;
    let caps = Caps { max_hbar: 8, max_degree: 8 };
    let one = MultiPoly::one(dom.clone(), caps);
    let out = hqe_check(
        &dom,
        ZInput::Raw(&one),
        &no_q(),
        &opts(4, 8, 1),
        TrustMode::DegreeBudget { d_store: 8 },
    )
    .unwrap();
    assert!(out.report.pass);
    for r in &out.residuals {
        assert!(r.is_zero());
    }
}

#[test]
fn gauge_orbit_of_one_passes() {
    // Z = exp(p_1) is in the linear-exponent orbit of the trivial tau.
    let dom = Rationals;
    let caps = Caps { max_hbar: 0, max_degree: 10 };
    let mut logz = MultiPoly::zero(dom.clone(), caps);
    logz.add_term(0, Mono::var(1), qr(1, 1));
    let z = logz.exp();
    let out = hqe_check(
        &dom,
        ZInput::Raw(&z),
        &no_q(),
        &HqeOptions {
            d_report: 4,
            h_report: 0,
            j_cap: 6,
            x_lambda: vec![qr(0, 1), qr(0, 1), qr(-1, 1)],
            n_powers: 0,
            tol: 0.0,
        },
        TrustMode::DegreeBudget { d_store: 10 },
    )
    .unwrap();
    assert_eq!(out.report.trusted_failed, 0, "{:?}", out.report.coefficients);
    assert!(out.report.pass);
}

#[test]
fn one_plus_p2_fails() {
    let dom = Rationals;
    let caps = Caps { max_hbar: 0, max_degree: 10 };
    let mut z = MultiPoly::one(dom.clone(), caps);
    z.add_term(0, Mono::var(2), qr(1, 1));
    let out = hqe_check(
        &dom,
        ZInput::Raw(&z),
        &no_q(),
        &HqeOptions {
            d_report: 4,
            h_report: 0,
            j_cap: 6,
            x_lambda: vec![qr(0, 1), qr(0, 1), qr(-1, 1)],
            n_powers: 0,
            tol: 0.0,
        },
        TrustMode::DegreeBudget { d_store: 10 },
    )
    .unwrap();
    assert!(!out.report.pass);
    assert!(out.report.trusted_failed > 0);
    // the known leading failure: coefficient of q'_1 q'_2 equals 2
    let res = &out.residuals[0];
    let m = Mono::var(qp_var(1)).mul(&Mono::var(qp_var(2)));
    assert_eq!(res.coeff(0, &m), qr(2, 1));
}

#[test]
fn shift_part_composes_to_identity() {
    // applying the shift q'_k -> q'_k - lambda^{-k} and then its inverse is
    // the identity on polynomials
    let dom = Rationals;
    let caps = LamCaps {
        caps: Caps { max_hbar: 2, max_degree: 6 },
        lam_lo: -30,
        lam_hi: 0,
        qp_weight_max: 40,
    };
    let shift = |p: &LamPoly<Rationals>, sign: i64| -> LamPoly<Rationals> {
        let mut out = LamPoly::zero(dom.clone(), caps);
        for (lam, poly) in p.slices.iter() {
            for ((h, m), c) in poly.terms.iter() {
                // expand each q'_k as q'_k + sign*lambda^{-k}
                let mut terms = vec![(*lam, Mono::one(), c.clone())];
                for &(v, e) in m.0.iter() {
                    for _ in 0..e {
                        let mut next = vec![];
                        for (l0, mono, coeff) in &terms {
                            if v >= trtau_hirota::lam::QP_OFFSET {
                                let k = (v - trtau_hirota::lam::QP_OFFSET) as i64;
                                next.push((*l0, mono.mul(&Mono::var(v)), coeff.clone()));
                                next.push((
                                    l0 - k,
                                    mono.clone(),
                                    dom.mul(coeff, &qr(sign, 1)),
                                ));
                            } else {
                                next.push((*l0, mono.mul(&Mono::var(v)), coeff.clone()));
                            }
                        }
                        terms = next;
                    }
                }
                for (l0, mono, coeff) in terms {
                    out.add_term(l0, *h, mono, coeff);
                }
            }
        }
        out
    };
    let mut p = LamPoly::zero(dom.clone(), caps);
    p.add_term(0, 1, Mono::var(qp_var(1)).mul(&Mono::var(qp_var(3))), qr(5, 7));
    p.add_term(0, 0, Mono::var(qp_var(2)), qr(-2, 3));
    p.add_term(0, 2, Mono::var(1).mul(&Mono::var(qp_var(1))), qr(1, 1));
    let roundtrip = shift(&shift(&p, -1), 1);
    for lam in -30..=0i64 {
        let a = p.slice(lam);
        let b = roundtrip.slice(lam);
        match (a, b) {
            (None, None) => {}
            (x, y) => {
                let empty = MultiPoly::zero(dom.clone(), caps.caps);
                let x = x.unwrap_or(&empty);
                let y = y.unwrap_or(&empty);
                let keys: std::collections::BTreeSet<_> =
                    x.terms.keys().chain(y.terms.keys()).collect();
                for key in keys {
                    assert_eq!(
                        x.terms.get(key).cloned().unwrap_or_else(|| qr(0, 1)),
                        y.terms.get(key).cloned().unwrap_or_else(|| qr(0, 1)),
                        "lambda^{lam} {key:?}"
                    );
                }
            }
        }
    }
}
