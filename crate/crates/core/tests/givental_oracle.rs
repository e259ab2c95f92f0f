//! Oracle equality: the stable-graph-sum ancestors must match the
//! recursion's tensors in the dzeta basis, exactly, on both exact fixtures.

use num_bigint::BigInt;
use trtau_core::curve::rational::{build_rational_geometry, BuildOrders, RationalCurveSpec};
use trtau_core::givental::{
    extract_calibration, graph_sum_ancestors, graph_sum_data, recursion_ancestors,
    t_vacuum_defect, v_matrix, GRAPH_SUM_TARGETS,
};
use trtau_core::scalar::{Domain, NumberField, Rat, RatFuncs, Rationals};
use trtau_core::tr::TrEngine;

fn qr(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn orders() -> BuildOrders {
    BuildOrders {
        airy: 30,
        jmax: 10,
        kmax_forms: 6,
    }
}

fn check_fixture<D: Domain>(geo: &trtau_core::curve::LocalGeometry<D>, label: &str) {
    let dom = geo.dom.clone();
    let engine = TrEngine::new(geo).unwrap();
    let tensors = engine.recurse(4).unwrap();
    let cal = extract_calibration(geo, 6).unwrap();

    // symplectic condition through the extraction order
    for (m, defect) in cal.r.symplectic_defect(&dom).iter().enumerate() {
        assert!(
            trtau_core::givental::mat_is_zero(&dom, defect),
            "{label}: symplectic defect at order {m}"
        );
    }
    // T(u) = u 1bar - u R^{-1}(u) v(u), exactly
    for (m, defect) in t_vacuum_defect(&dom, &cal).iter().enumerate() {
        for v in defect {
            assert!(dom.is_zero(v), "{label}: T-vacuum defect at order {m}");
        }
    }
    // V-matrix divides exactly
    let _v = v_matrix(&dom, &cal.r).unwrap();

    // graph sum vs recursion ancestors at every supported target
    let data = graph_sum_data(geo, &cal).unwrap();
    for &(g, n) in GRAPH_SUM_TARGETS.iter() {
        let oracle = graph_sum_ancestors(&data, geo.n_crit(), g, n).unwrap();
        let engine_t = recursion_ancestors(&dom, &cal.r, &tensors, g, n).unwrap();
        let kb = oracle.k_bound().max(0) as u8;
        for key in trtau_core::tr::sorted_multisets(geo.n_crit() as u8, kb, n as usize) {
            let a = oracle.get(&key, &dom);
            let b = engine_t.get(&key, &dom);
            assert!(
                dom.is_zero(&dom.sub(&a, &b)),
                "{label}: ancestor mismatch at (g,n)=({g},{n}) key {key:?}: {} vs {}",
                dom.fmt_elem(&a),
                dom.fmt_elem(&b)
            );
        }
    }
}

#[test]
fn airy_graph_sum_equals_recursion() {
    let dom = Rationals;
    let spec = RationalCurveSpec {
        dom: dom.clone(),
        x: vec![qr(0, 1), qr(0, 1), qr(1, 2)],
        y_num: vec![qr(0, 1), qr(1, 1)],
        y_den: vec![qr(1, 1)],
        crit_hints: vec![],
        eta_branches: vec![qr(1, 1)],
        boundary_coeff: qr(1, 2),
        boundary_r: 2,
        lambda_branch: qr(1, 1),
    };
    let (_, geo) = build_rational_geometry(&spec, orders()).unwrap();
    // trivial theory sanity: T = 0, vacuum = 1bar, R = Id
    let cal = extract_calibration(&geo, 6).unwrap();
    for m in 1..=cal.r.order() {
        assert!(trtau_core::givental::mat_is_zero(&Rationals, &cal.r.mats[m]));
    }
    for tv in cal.t.iter() {
        for c in tv {
            assert_eq!(*c, qr(0, 1));
        }
    }
    assert_eq!(cal.v[0], vec![qr(1, 1)]);
    for vm in cal.v.iter().skip(1) {
        for c in vm {
            assert_eq!(*c, qr(0, 1));
        }
    }
    check_fixture(&geo, "airy");
}

#[test]
fn bessel_graph_sum_equals_recursion() {
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
    let (_, geo) = build_rational_geometry(&spec, orders()).unwrap();
    // T_1 = 1 - Delta^{-1/2} with Delta^{-1/2} = -4/eps^2
    let cal = extract_calibration(&geo, 6).unwrap();
    let want = dom.sub(
        &dom.one(),
        &dom.div(&dom.from_i64(-4), &dom.mul(&eps, &eps)).unwrap(),
    );
    assert_eq!(cal.t[0][0], want);
    // R = Id for this curve: z is affine in eta
    for m in 1..=cal.r.order() {
        assert!(trtau_core::givental::mat_is_zero(&dom, &cal.r.mats[m]));
    }
    check_fixture(&geo, "bessel");
}
