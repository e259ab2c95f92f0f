use num_bigint::BigInt;
use std::time::Instant;
use trtau_core::curve::rational::{build_rational_geometry, BuildOrders, RationalCurveSpec};
use trtau_core::scalar::{Domain, EpsPairs, Rat};
use trtau_core::tr::descend::extract_descendents;
use trtau_core::tr::TrEngine;
use trtau_hirota::tau::assemble_tau;
use trtau_hirota::vertex::{hqe_check, HqeOptions, TrustMode, ZInput};

type Dom = EpsPairs;

fn qrat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn main() {
    let dom: Dom = EpsPairs::new(qrat(-2, 1));
    let eps = dom.eps();
    let s = dom.gen_s();
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
    eprintln!("start");
    let t0 = Instant::now();
    let (_, geo) =
        build_rational_geometry(&spec, BuildOrders { airy: 40, jmax: 20, kmax_forms: 7 }).unwrap();
    eprintln!("geometry: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let engine = TrEngine::new(&geo).unwrap();
    let c: u32 = 5;
    let k: u32 = 15;
    let tensors = engine.recurse(c as i64).unwrap();
    eprintln!("recursion: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let table = extract_descendents(&geo, &tensors, c, k).unwrap();
    eprintln!("descendents: {:?} ({} entries)", t0.elapsed(), table.entries.len());
    let fast = dom.clone();
    let t0 = Instant::now();
    let tau = assemble_tau(&table, c + 2, 8, k + 2).unwrap();
    eprintln!("tau: {:?} ({} log terms)", t0.elapsed(), tau.log_stable.terms.len());
    let x_lambda = vec![fast.zero(), fast.zero(), fast.from_i64(-1)];
    let t0 = Instant::now();
    let opts = HqeOptions {
        d_report: 6,
        h_report: c + 2,
        j_cap: (k + 1) as u64,
        x_lambda,
        n_powers: 1,
        tol: 0.0,
    };
    let out = hqe_check(
        &fast,
        ZInput::LogStable(&tau.log_stable),
        &tau.q,
        &opts,
        TrustMode::Window { c, k },
    )
    .unwrap();
    eprintln!(
        "hqe: {:?} (trusted_failed={}, shown={})",
        t0.elapsed(),
        out.report.trusted_failed,
        out.report.coefficients.len()
    );
}
