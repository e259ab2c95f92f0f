//! End-to-end exact checks of the recursion engine on the two rational
//! fixtures: the Airy curve x = z^2/2, y = z over Q, and the deformed
//! degree-2 Bessel curve x = -z^2 + eps z, y = sqrt(-2)/z over
//! Q(eps)[s]/(s^2+2).

use num_bigint::BigInt;
use trtau_core::curve::rational::{build_rational_geometry, BuildOrders, RationalCurveSpec};
use trtau_core::curve::{LocalGeometry, RationalCurve};
use trtau_core::givental::dvv::KwOracle;
use trtau_core::scalar::{Domain, NumberField, Rat, RatFuncs, Rationals};
use trtau_core::tr::descend::{
    extract_descendents, form_reduction_residues, two_point_reduction_residues,
};
use trtau_core::tr::TrEngine;

fn qr(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn airy_geometry(orders: BuildOrders) -> (RationalCurve<Rationals>, LocalGeometry<Rationals>) {
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
    build_rational_geometry(&spec, orders).expect("airy geometry")
}

type BesselDomain = NumberField<RatFuncs>;

pub fn bessel_domain() -> BesselDomain {
    let base = RatFuncs::new("eps");
    NumberField::new(base.clone(), "s", vec![base.from_i64(2), base.zero(), base.one()]).unwrap()
}

pub fn bessel_geometry(
    orders: BuildOrders,
) -> (RationalCurve<BesselDomain>, LocalGeometry<BesselDomain>) {
    let dom = bessel_domain();
    let base = dom.base.clone();
    let eps = dom.from_base(base.gen());
    let s = dom.gen();
    // x = -z^2 + eps z; y = s/z; eta branch: eta = s (z - eps/2), b^2 = x'' = -2
    let spec = RationalCurveSpec {
        dom: dom.clone(),
        x: vec![dom.zero(), eps.clone(), dom.from_i64(-1)],
        y_num: vec![s.clone()],
        y_den: vec![dom.zero(), dom.one()],
        crit_hints: vec![],
        eta_branches: vec![s.clone()],
        // boundary: x = -lambda^2 with lim lambda/z = 1
        boundary_coeff: dom.from_i64(-1),
        boundary_r: 2,
        lambda_branch: dom.one(),
    };
    build_rational_geometry(&spec, orders).expect("bessel geometry")
}

fn airy_orders() -> BuildOrders {
    BuildOrders {
        airy: 30,
        jmax: 12,
        kmax_forms: 7,
    }
}

#[test]
fn airy_charts_are_global() {
    let (_, geo) = airy_geometry(airy_orders());
    // eta = z exactly, y_odd = eta, Bergman regular part vanishes
    let chart = &geo.charts[0];
    assert_eq!(chart.z_crit, qr(0, 1));
    assert_eq!(chart.x_crit, qr(0, 1));
    assert_eq!(chart.eta_of_z.coeff(1).unwrap(), qr(1, 1));
    assert!(chart.eta_of_z.clone().truncate(20).sub(
        &trtau_core::scalar::Series::monomial(Rationals, qr(1, 1), 1, 20)
    ).is_zero_series());
    assert_eq!(chart.y_odd.coeff(1).unwrap(), qr(1, 1));
    assert_eq!(chart.delta_inv_sqrt, qr(1, 1));
    for i in 0..=geo.b_reg[0][0].n {
        for j in 0..=(geo.b_reg[0][0].n - i) {
            assert_eq!(geo.b_reg[0][0].coeff(i, j).unwrap(), qr(0, 1));
        }
    }
}

#[test]
fn airy_global_forms_match_hand_values() {
    let (curve, geo) = airy_geometry(airy_orders());
    let chart = &geo.charts[0];
    // dxi_0 = -dz/z^2; dxi_1 = -3 dz/z^4
    let f0 = curve.dxi_global(chart, 0).unwrap();
    assert_eq!(f0.num, vec![qr(-1, 1)]);
    assert_eq!(f0.den, vec![qr(0, 1), qr(0, 1), qr(1, 1)]);
    let f1 = curve.dxi_global(chart, 1).unwrap();
    assert_eq!(f1.num, vec![qr(-3, 1)]);
    assert_eq!(f1.den.len(), 5);
    // boundary: lambda = z, so dxi_0 = d(lambda^{-1}), dxi_1 = d(lambda^{-3})
    let c0 = geo.dxi_boundary_coeffs(0, 0).unwrap();
    assert_eq!(c0[0], qr(1, 1));
    for c in &c0[1..] {
        assert_eq!(*c, qr(0, 1));
    }
    let c1 = geo.dxi_boundary_coeffs(0, 1).unwrap();
    assert_eq!(c1[2], qr(1, 1));
    for (j, c) in c1.iter().enumerate() {
        if j != 2 {
            assert_eq!(*c, qr(0, 1));
        }
    }
}

#[test]
fn lemma_residues_vanish_at_critical_points() {
    // Res_{z^alpha} x^m dxi_k = 0 for the Airy and Bessel fixtures
    let (curve, geo) = airy_geometry(airy_orders());
    for k in 0..=4i64 {
        let f = curve.dxi_global(&geo.charts[0], k).unwrap();
        for m in 0..=3u32 {
            let xm = curve.x.pow(m);
            let prod = xm.mul(&f);
            assert!(Rationals.is_zero(&prod.residue_at(&qr(0, 1)).unwrap()));
            // total residue of a rational form vanishes, so infinity too
            assert!(Rationals.is_zero(&prod.residue_at_infinity().unwrap()));
        }
    }
    let (curve, geo) = bessel_geometry(airy_orders());
    let dom = curve.dom.clone();
    let zb = geo.charts[0].z_crit.clone();
    for k in 0..=4i64 {
        let f = curve.dxi_global(&geo.charts[0], k).unwrap();
        for m in 0..=3u32 {
            let xm = curve.x.pow(m);
            let prod = xm.mul(&f);
            assert!(dom.is_zero(&prod.residue_at(&zb).unwrap()), "k={k} m={m}");
        }
    }
}

#[test]
fn bessel_chart_expansion() {
    let (_, geo) = bessel_geometry(airy_orders());
    let dom = geo.dom.clone();
    let base = dom.base.clone();
    let eps = dom.from_base(base.gen());
    let chart = &geo.charts[0];
    // z_crit = eps/2, x_crit = eps^2/4
    let half_eps = dom.mul(&eps, &dom.from_rat(&qr(1, 2)));
    assert_eq!(chart.z_crit, half_eps);
    let quarter = dom.from_rat(&qr(1, 4));
    assert_eq!(chart.x_crit, dom.mul(&dom.mul(&eps, &eps), &quarter));
    // Delta^{-1/2} = y'(z^b)/sqrt(x'') = -4/eps^2
    let want = dom
        .div(&dom.from_i64(-4), &dom.mul(&eps, &eps))
        .unwrap();
    assert_eq!(chart.delta_inv_sqrt, want);
    // Bergman regular part vanishes (z is affine in eta)
    for i in 0..=geo.b_reg[0][0].n {
        for j in 0..=(geo.b_reg[0][0].n - i) {
            assert!(dom.is_zero(&geo.b_reg[0][0].coeff(i, j).unwrap()));
        }
    }
    // boundary chart: lambda = z - eps/2 - eps^2/(8z) + ...
    let lam = &geo.boundary.lambda_in_w;
    assert_eq!(lam.coeff(-1).unwrap(), dom.one());
    assert_eq!(lam.coeff(0).unwrap(), dom.neg(&half_eps));
    let e2_8 = dom
        .div(&dom.mul(&eps, &eps), &dom.from_i64(-8))
        .unwrap();
    assert_eq!(lam.coeff(1).unwrap(), e2_8);
}

#[test]
fn airy_recursion_matches_kw_oracle() {
    let (_, geo) = airy_geometry(airy_orders());
    let engine = TrEngine::new(&geo).unwrap();
    let tensors = engine.recurse(5).unwrap();
    let kw = KwOracle::new();
    // every tensor entry equals the intersection-number oracle
    for ((g, n), t) in tensors.iter() {
        for (key, v) in t.entries.iter() {
            let ds: Vec<u64> = key.iter().map(|&(_, k)| k as u64).collect();
            let want = kw.correlator(*g, &ds);
            assert_eq!(*v, want, "(g,n)=({g},{n}) key={key:?}");
        }
        // and the oracle is nonzero only where the tensor is stored
        for key in trtau_core::tr::sorted_multisets(1, t.k_bound() as u8, *n as usize) {
            let ds: Vec<u64> = key.iter().map(|&(_, k)| k as u64).collect();
            let want = kw.correlator(*g, &ds);
            assert_eq!(t.get(&key, &Rationals), want);
        }
    }
    // pinned values
    let t03 = tensors.get(&(0, 3)).unwrap();
    assert_eq!(t03.get(&[(0, 0), (0, 0), (0, 0)], &Rationals), qr(1, 1));
    let t11 = tensors.get(&(1, 1)).unwrap();
    assert_eq!(t11.get(&[(0, 1)], &Rationals), qr(1, 24));
    let t21 = tensors.get(&(2, 1)).unwrap();
    assert_eq!(t21.get(&[(0, 4)], &Rationals), qr(1, 1152));
}

#[test]
fn airy_descendents_and_pairing() {
    let (_, geo) = airy_geometry(airy_orders());
    let engine = TrEngine::new(&geo).unwrap();
    let tensors = engine.recurse(3).unwrap();
    let table = extract_descendents(&geo, &tensors, 3, 9).unwrap();
    // <alpha_3>_{1,1} = 1/8
    assert_eq!(table.get(1, 1, &[3]), qr(1, 8));
    // the two-point pairing vanishes identically (lambda = z)
    for row in table.q.iter() {
        for v in row {
            assert_eq!(*v, qr(0, 1));
        }
    }
}

#[test]
fn pole_bound_just_beyond_is_zero() {
    // verify the structural pole bound k <= 3g-3+n by checking that the
    // recursion residue at k = 3g-2+n vanishes for (1,1) on the Bessel curve
    let (_, geo) = bessel_geometry(airy_orders());
    let engine = TrEngine::new(&geo).unwrap();
    let tensors = engine.recurse(3).unwrap();
    let dom = geo.dom.clone();
    let t11 = tensors.get(&(1, 1)).unwrap();
    assert!(dom.is_zero(&t11.get(&[(0, 2)], &dom)));
    let t12 = tensors.get(&(1, 2)).unwrap();
    assert!(dom.is_zero(&t12.get(&[(0, 0), (0, 3)], &dom)));
}

#[test]
fn bessel_omega_g0_closed_form() {
    let (_, geo) = bessel_geometry(BuildOrders {
        airy: 40,
        jmax: 12,
        kmax_forms: 7,
    });
    let dom = geo.dom.clone();
    let base = dom.base.clone();
    let eps = dom.from_base(base.gen());
    let engine = TrEngine::new(&geo).unwrap();
    let tensors = engine.recurse(5).unwrap();
    // The genus-g scalar invariant follows the Bernoulli pattern
    // ((-1)^g / r^{g-1}) B_{2g}/(2g(2g-2)) eps^{2-2g}: two independent
    // computations (the residue pipeline here and the dilaton-leaf
    // expansion of the calibration) agree on the overall sign.
    // g = 2: -1/(480 eps^2)
    let w20 = engine.omega_g0(&tensors, 2).unwrap();
    let e2 = dom.mul(&eps, &eps);
    let want = dom
        .div(&dom.from_i64(-1), &dom.mul(&dom.from_i64(480), &e2))
        .unwrap();
    assert_eq!(w20, want);
    // g = 3: -1/(4032 eps^4)
    let w30 = engine.omega_g0(&tensors, 3).unwrap();
    let e4 = dom.mul(&e2, &e2);
    let want = dom
        .div(&dom.from_i64(-1), &dom.mul(&dom.from_i64(4032), &e4))
        .unwrap();
    assert_eq!(w30, want);
}

#[test]
fn bessel_descendents_have_only_odd_indices() {
    let (_, geo) = bessel_geometry(airy_orders());
    let dom = geo.dom.clone();
    let engine = TrEngine::new(&geo).unwrap();
    let tensors = engine.recurse(3).unwrap();
    let table = extract_descendents(&geo, &tensors, 3, 9).unwrap();
    assert!(!table.entries.is_empty());
    for ((_, _, ks), v) in table.entries.iter() {
        if ks.iter().any(|k| k % 2 == 0) {
            assert!(dom.is_zero(v), "even index with nonzero value: {ks:?}");
        }
    }
    // q-matrix symmetric, and vanishing whenever k+l is odd
    for k in 1..=9u32 {
        for l in 1..=9u32 {
            let a = table.q_entry(k, l);
            let b = table.q_entry(l, k);
            assert!(dom.is_zero(&dom.sub(&a, &b)));
            if (k + l) % 2 == 1 {
                assert!(dom.is_zero(&a));
            }
        }
    }
}

#[test]
fn reduction_residues_vanish_and_wrong_lambda_fails() {
    let (_, geo) = bessel_geometry(airy_orders());
    let dom = geo.dom.clone();
    let res = form_reduction_residues(&geo, 3).unwrap();
    for per_k in res.iter() {
        for per_m in per_k.iter() {
            for v in per_m {
                assert!(dom.is_zero(v));
            }
        }
    }
    let two = two_point_reduction_residues(&geo, 3).unwrap();
    for r in two.iter() {
        assert!(r.is_zero_series(), "{}", r.fmt_with("w"));
    }
    // metamorphic: a boundary coordinate in which x is NOT polynomial must
    // break the subtracted two-point reduction (lambda' = lambda + 1/lambda)
    let lam = geo.boundary.lambda_in_w.clone();
    let lam_wrong = lam.add(&lam.invert().unwrap());
    let jmax = geo.boundary.jmax;
    let boundary2 = trtau_core::curve::BoundaryData::build(
        &dom,
        lam_wrong,
        geo.boundary.x_lambda.clone(),
        geo.boundary.x_in_w.clone(),
        jmax,
    )
    .unwrap();
    let (q2, reg2) =
        trtau_core::curve::rational::boundary_q_data(&dom, &boundary2, jmax).unwrap();
    let mut geo2 = geo.clone();
    geo2.boundary = boundary2;
    geo2.q_matrix = q2;
    geo2.q_reg = reg2;
    let two_wrong = two_point_reduction_residues(&geo2, 2).unwrap();
    assert!(
        two_wrong.iter().any(|r| !r.is_zero_series()),
        "reduction check failed to detect a non-polynomial boundary coordinate"
    );
}

#[test]
fn scaling_covariance_on_airy() {
    // rescale (x, y) -> (x/2, y/3); coefficients transform by
    // (c1 c2)^{2g-2+n} after the induced chart rescaling, which multiplies
    // dxi_k by c1^{-(2k+1)/2}. Work over Q(s)/(s^2-2) to house sqrt(2).
    type D2 = NumberField<Rationals>;
    let dom: D2 = NumberField::new(Rationals, "s", vec![qr(-2, 1), qr(0, 1), qr(1, 1)]).unwrap();
    let s = dom.gen(); // sqrt(2)
    let spec = RationalCurveSpec {
        dom: dom.clone(),
        // x = z^2/4  (x/2 with x = z^2/2)
        x: vec![dom.zero(), dom.zero(), dom.from_rat(&qr(1, 4))],
        // y = z/3
        y_num: vec![dom.zero(), dom.from_rat(&qr(1, 3))],
        y_den: vec![dom.one()],
        crit_hints: vec![],
        // x'' = 1/2, branch = 1/sqrt(2) = s/2
        eta_branches: vec![dom.mul(&s, &dom.from_rat(&qr(1, 2)))],
        boundary_coeff: dom.from_rat(&qr(1, 4)),
        boundary_r: 2,
        lambda_branch: dom.one(),
    };
    let (_, geo2) = build_rational_geometry(&spec, airy_orders()).unwrap();
    let engine2 = TrEngine::new(&geo2).unwrap();
    let tensors2 = engine2.recurse(3).unwrap();

    let (_, geo1) = airy_geometry(airy_orders());
    let engine1 = TrEngine::new(&geo1).unwrap();
    let tensors1 = engine1.recurse(3).unwrap();

    // The rescaled chart satisfies eta-scaled = eta/sqrt(c1), which
    // multiplies dxi_k by c1^{(2k+1)/2}; so the coefficients transform as
    // F-scaled = (c1 c2)^{2g-2+n} * prod_i c1^{-(2k_i+1)/2} * F.
    // With c1 = 2: c1^{-(2k+1)/2} = 2^{-k}/sqrt(2) = 2^{-k} s/2.
    let c1c2 = dom.from_i64(6);
    let half_s = dom.mul(&s, &dom.from_rat(&qr(1, 2)));
    for ((g, n), t1) in tensors1.iter() {
        let t2 = tensors2.get(&(*g, *n)).unwrap();
        for (key, v1) in t1.entries.iter() {
            let mut want = dom.from_rat(v1);
            let chi = 2 * *g as i64 - 2 + *n as i64;
            want = dom.mul(&want, &dom.pow_i64(&c1c2, chi).unwrap());
            for &(_, k) in key {
                let f = dom.mul(&dom.pow_i64(&dom.from_rat(&qr(1, 2)), k as i64).unwrap(), &half_s);
                want = dom.mul(&want, &f);
            }
            assert_eq!(t2.get(key, &dom), want, "(g,n)=({g},{n}), key {key:?}");
        }
    }
}
