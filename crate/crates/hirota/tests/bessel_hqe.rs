//! End-to-end reduced bilinear checks on the degree-2 deformed Bessel tau.

use num_bigint::BigInt;
use trtau_core::curve::rational::{build_rational_geometry, BuildOrders, RationalCurveSpec};
use trtau_core::scalar::{Domain, NumberField, Rat, RatFuncs};
use trtau_core::tr::descend::extract_descendents;
use trtau_core::tr::TrEngine;
use trtau_hirota::tau::{assemble_tau, reduction_check};
use trtau_hirota::vertex::{hqe_check, trusted_diff, HqeOptions, TrustMode, ZInput};

type Dom = NumberField<RatFuncs>;

fn qr(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn bessel(jmax: i64, kmax: i64, airy: i64) -> trtau_core::curve::LocalGeometry<Dom> {
    let base = RatFuncs::new("eps");
    let dom =
        NumberField::new(base.clone(), "s", vec![base.from_i64(2), base.zero(), base.one()])
            .unwrap();
    let eps = dom.from_base(base.gen());
    let s = dom.gen();
    let spec = RationalCurveSpec {
        dom: dom.clone(),
        x: vec![dom.zero(), eps.clone(), dom.from_i64(-1)],
        y_num: vec![s.clone()],
        y_den: vec![dom.zero(), dom.one()],
        crit_hints: vec![],
        eta_branches: vec![s.clone()],
        boundary_coeff: dom.from_i64(-1),
        boundary_r: 2,
        lambda_branch: dom.one(),
    };
    let (_, geo) = build_rational_geometry(&spec, BuildOrders { airy, jmax, kmax_forms: kmax }).unwrap();
    geo
}

#[test]
fn small_window_reduced_hqe_passes() {
    let geo = bessel(10, 4, 24);
    let dom = geo.dom.clone();
    let engine = TrEngine::new(&geo).unwrap();
    let c: u32 = 3;
    let k: u32 = 7;
    let tensors = engine.recurse(c as i64).unwrap();
    let table = extract_descendents(&geo, &tensors, c, k).unwrap();
    let tau = assemble_tau(&table, c + 2, 5, k + 2).unwrap();

    // reduction: x = -lambda^2 kills even times
    let x_lambda = vec![dom.zero(), dom.zero(), dom.from_i64(-1)];
    let red = reduction_check(&tau, &x_lambda, 2).unwrap();
    assert!(red.pass, "{:?}", red.per_power);

    let opts = HqeOptions {
        d_report: 4,
        h_report: c + 2,
        j_cap: (k + 1) as u64,
        x_lambda: x_lambda.clone(),
        n_powers: 1,
        tol: 0.0,
    };
    let trust = TrustMode::Window { c, k };
    let out = hqe_check(&dom, ZInput::LogStable(&tau.log_stable), &tau.q, &opts, trust).unwrap();
    assert_eq!(
        out.report.trusted_failed,
        0,
        "sample failures: {:?}",
        &out.report.coefficients[..out.report.coefficients.len().min(5)]
    );
    // untrusted residual coefficients exist (the window is genuinely finite)
    assert!(out.report.coefficients.iter().any(|c| !c.trusted));

    // trust soundness: perturbing out-of-window correlators leaves every
    // trusted coefficient unchanged
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1234);
    let all_keys: Vec<_> = table.entries.keys().cloned().collect();
    for trial in 0..4 {
        let mut table2 = table.clone();
        // perturb either a too-deep hbar entry or a too-high index entry
        if trial % 2 == 0 {
            // add a fake entry beyond the window: (g,n) with chi = c+1
            let key = (0u32, (c + 3) as u32, vec![1u32; (c + 3) as usize]);
            let delta = dom.from_i64(rng.gen_range(1..9));
            table2.entries.insert(key, delta);
        } else {
            // bump an index beyond k on an existing entry shape
            let (g, n, mut js) = all_keys[rng.gen_range(0..all_keys.len())].clone();
            js[0] = k + 2;
            js.sort_unstable();
            let delta = dom.from_i64(rng.gen_range(1..9));
            table2.entries.insert((g, n, js), delta);
        }
        let tau2 = assemble_tau(&table2, c + 2, 5, k + 2).unwrap();
        let out2 =
            hqe_check(&dom, ZInput::LogStable(&tau2.log_stable), &tau2.q, &opts, trust).unwrap();
        let changed = trusted_diff(&dom, &out, &out2, trust, 2, 0.0);
        assert_eq!(changed, 0, "trusted coefficient changed under perturbation");
        // and the perturbation must actually reach some untrusted coefficient
        let mut any = false;
        for (ra, rb) in out.residuals.iter().zip(&out2.residuals) {
            let keys: std::collections::BTreeSet<_> =
                ra.terms.keys().chain(rb.terms.keys()).cloned().collect();
            for key in keys {
                if !dom.is_zero(&dom.sub(&ra.coeff(key.0, &key.1), &rb.coeff(key.0, &key.1))) {
                    any = true;
                }
            }
        }
        assert!(any, "perturbation had no effect at all (test too weak)");
    }
}
