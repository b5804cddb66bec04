//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits nonzero on any unexpected outcome. Criterion 5 asks for injectivity at
//! `β = 1/2, q = 4`, where `(1, 4)` and `(2, 2)` share the exponent `3`; that
//! sub-check is expected to fail and is reported as such.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gs_core::analytic::{bound_chain_report, cauchy_self_test_auto, eval_r_derivative, Contour};
use gs_core::auxfun::{
    build_cleared_matrix, check_injectivity, derive_params, exponent_collisions, house_rho_upper_check,
    minimal_nonvanishing_order, norm_lower_bound_check, solve_coefficients, verify_vanishing, AuxParams, EtaSolution,
    GSInstance, InstanceSpec, Mode, ParamMode, RhoWitness,
};
use gs_core::ball::CBall;
use gs_core::constants::{compute_constants, instance_threshold};
use gs_core::exact::{IntMatrix, QPoly};
use gs_core::numfield::{basis_repr_constant, make_field, parse_element, NFElement, NumberField};
use gs_core::pipeline::{run_pipeline, with_precision_retry, PipelineOptions};
use gs_core::siegel::{ok_claimed_bound, siegel_int, siegel_ok};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Complete, Float, Integer, Rational};
use serde_json::json;

const SEED: u64 = 0x5eed_2024;
const PREC: u32 = 128;

const SIEGEL_Z_INSTANCES: usize = 200;
const SIEGEL_Z_BUDGET: Duration = Duration::from_secs(10);
const SIEGEL_OK_SYSTEMS: usize = 50;
const SIEGEL_OK_BUDGET: Duration = Duration::from_secs(60);
const HOUSE_SAMPLES: usize = 100;
const HOUSE_BUDGET: Duration = Duration::from_secs(30);
const NORM_SAMPLES: usize = 100;
const SYNTHETIC_BUDGET: Duration = Duration::from_secs(60);
const EQ7_MAX_WIDTH: f64 = 1e-10;
const GELFOND_BUDGET: Duration = Duration::from_secs(30 * 60);
const CAUCHY_POINTS: usize = 5;
const CAUCHY_MAX_WIDTH: f64 = 1e-8;
const CONSTANTS_BUDGET: Duration = Duration::from_secs(10);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Outcome::new(false, format!("error: {e}"))
    }
}

fn sqrt2() -> Arc<NumberField> {
    make_field(&QPoly::from_ints(&[-2, 0, 1]), PREC).unwrap()
}

fn cbrt2() -> Arc<NumberField> {
    make_field(&QPoly::from_ints(&[-2, 0, 0, 1]), PREC).unwrap()
}

fn int_element(rng: &mut ChaCha8Rng, f: &Arc<NumberField>, lim: i64) -> NFElement {
    let coords = (0..f.degree()).map(|_| Rational::from(rng.gen_range(-lim..=lim))).collect();
    NFElement::new(f, coords).unwrap()
}

fn rat_element(rng: &mut ChaCha8Rng, f: &Arc<NumberField>) -> NFElement {
    let coords = (0..f.degree()).map(|_| Rational::from((rng.gen_range(-20i64..=20), rng.gen_range(1i64..=6)))).collect();
    NFElement::new(f, coords).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn criterion_1(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for i in 0..SIEGEL_Z_INSTANCES {
        let n = rng.gen_range(2..=12usize);
        let m = rng.gen_range(1..n);
        let entries: Vec<Integer> = (0..m * n).map(|_| Integer::from(rng.gen_range(-10i64..=10))).collect();
        let a = IntMatrix::new(m, n, entries).unwrap();
        let sol = match siegel_int(&a) {
            Ok(s) => s,
            Err(e) => return Outcome::error(format!("instance {i}: {e}")),
        };
        let x = &sol.vector;
        let sup = x.iter().map(|v| v.clone().abs()).max().unwrap();
        let abound = a.max_abs().max(Integer::from(1));
        // sup ≤ (N·A)^{M/(N−M)} ⇔ sup^{N−M} ≤ (N·A)^M, exactly.
        let within = Pow::pow(&sup, (n - m) as u32).complete() <= Pow::pow(&(Integer::from(n) * &abound), m as u32).complete();
        let annihilated = a.mul_vec(x).iter().all(|v| *v == 0);
        if sup == 0 || !annihilated || !within || !sol.bound_satisfied {
            bad.push(i);
        }
    }
    let t = start.elapsed();
    Outcome::new(bad.is_empty() && t < SIEGEL_Z_BUDGET, format!("{SIEGEL_Z_INSTANCES} instances, failures {bad:?}, {}", secs(t)))
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let fields = [sqrt2(), cbrt2()];
    let mut bad = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..SIEGEL_OK_SYSTEMS {
        let f = &fields[i % 2];
        let q = rng.gen_range(2..=6usize);
        let p = rng.gen_range(1..q);
        let b: Vec<Vec<NFElement>> = (0..p).map(|_| (0..q).map(|_| int_element(rng, f, 3)).collect()).collect();
        let sol = match siegel_ok(&b) {
            Ok(s) => s,
            Err(e) => return Outcome::error(format!("system {i}: {e}")),
        };
        let xi = &sol.vector;
        let annihilated = b.iter().all(|row| {
            let s = row.iter().zip(xi).fold(NFElement::zero(f), |acc, (a, x)| &acc + &(a * x));
            s.is_zero()
        });
        let mut ahouse = Float::with_val(PREC, 1);
        for e in b.iter().flatten() {
            ahouse.max_mut(e.house().upper());
        }
        let claimed = ok_claimed_bound(&basis_repr_constant(f).unwrap(), p, q, &ahouse);
        let all_within = xi.iter().all(|x| x.house().upper() <= claimed.hi());
        let nonzero = xi.iter().any(|x| !x.is_zero());
        worst = worst.max(sol.achieved.log10_upper() - claimed.log10_lower());
        if !annihilated || !all_within || !nonzero || !sol.bound_satisfied {
            bad.push(i);
        }
    }
    let t = start.elapsed();
    Outcome::new(
        bad.is_empty() && t < SIEGEL_OK_BUDGET,
        format!("{SIEGEL_OK_SYSTEMS} systems, failures {bad:?}, max log10(achieved/claimed) {worst:.2}, {}", secs(t)),
    )
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (fi, f) in [sqrt2(), cbrt2()].iter().enumerate() {
        for i in 0..HOUSE_SAMPLES {
            let (a, b) = (rat_element(rng, f), rat_element(rng, f));
            let ha = a.house();
            let hm = match a.house_via_minpoly() {
                Ok(h) => h,
                Err(e) => return Outcome::error(e),
            };
            let agree = ha.lower() <= hm.upper() && hm.lower() <= ha.upper();
            let hb = b.house();
            let sum_ok = *(&a + &b).house().lower() <= Float::with_val(PREC, ha.upper() + hb.upper());
            let prod_ok = *(&a * &b).house().lower() <= Float::with_val(PREC, ha.upper() * hb.upper());
            if !(agree && sum_ok && prod_ok) {
                bad.push((fi, i));
            }
        }
    }
    let t = start.elapsed();
    Outcome::new(bad.is_empty() && t < HOUSE_BUDGET, format!("2 × {HOUSE_SAMPLES} elements, failures {bad:?}, {}", secs(t)))
}

fn criterion_4(rng: &mut ChaCha8Rng) -> Outcome {
    let k = sqrt2();
    let n1 = parse_element(&k, "3+x").unwrap().norm();
    let n2 = NFElement::theta(&k).norm();
    let fixed = n1 == 7 && n2 == -2;
    let fields = [sqrt2(), cbrt2()];
    let mut multiplicative = 0;
    let mut at_least_one = 0;
    for i in 0..NORM_SAMPLES {
        let f = &fields[i % 2];
        let (a, b) = (rat_element(rng, f), rat_element(rng, f));
        if (&a * &b).norm() == a.norm() * b.norm() {
            multiplicative += 1;
        }
        let mut c = int_element(rng, f, 9);
        while c.is_zero() {
            c = int_element(rng, f, 9);
        }
        let nc = c.norm();
        if nc.denom() == &1 && nc.clone().abs() >= 1 {
            at_least_one += 1;
        }
    }
    Outcome::new(
        fixed && multiplicative == NORM_SAMPLES && at_least_one == NORM_SAMPLES,
        format!("N(3+√2) = {n1}, N(√2) = {n2}, multiplicative {multiplicative}/{NORM_SAMPLES}, |N| ≥ 1 {at_least_one}/{NORM_SAMPLES}"),
    )
}

/// Returns the outcome with the injectivity sub-check excluded, and that sub-check.
fn criterion_5() -> (Outcome, bool) {
    let start = Instant::now();
    let spec = InstanceSpec::from_json(&json!({
        "field": {"poly": [-2, 0, 1]},
        "alpha": 2, "beta": "1/2", "gamma": "x",
        "sigma_index": 1, "q": 4, "mode": "synthetic", "m": 2, "n": 2
    }))
    .unwrap();
    let rep = match run_pipeline(&spec, &PipelineOptions { precision: PREC, target_width: EQ7_MAX_WIDTH }) {
        Ok(r) => r,
        Err(e) => return (Outcome::error(e), false),
    };
    let t = start.elapsed();
    let eq7 = rep.eq7.as_ref().expect("synthetic run validates the integral identity");
    let ok = rep.eta.nonzero > 0
        && rep.params.rows == 4
        && rep.eta.vanishing_verified
        && rep.witness.r >= 2
        && rep.witness.rho_nonzero
        && rep.norm.holds()
        && eq7.overlap
        && eq7.combined_width < EQ7_MAX_WIDTH
        && eq7.precision_bits == PREC
        && rep.passed()
        && t < SYNTHETIC_BUDGET;
    let detail = format!(
        "rows {} vanish {}, r = {}, l0 = {}, N = {}, integral overlap {} width {:.2e} at {} bits, injective {} (collisions {:?}), {}",
        rep.params.rows,
        rep.eta.vanishing_verified,
        rep.witness.r,
        rep.witness.l0,
        rep.norm.norm_rho,
        eq7.overlap,
        eq7.combined_width,
        eq7.precision_bits,
        rep.injectivity.injective,
        rep.injectivity.collisions,
        secs(t),
    );
    (Outcome::new(ok, detail), rep.injectivity.injective)
}

struct Gelfond {
    inst: GSInstance,
    params: AuxParams,
    sol: EtaSolution,
    witness: RhoWitness,
}

fn demo_spec() -> InstanceSpec {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "instances", "demo_sqrt2.json"].iter().collect();
    let raw: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    InstanceSpec::from_json(&raw).unwrap()
}

fn criterion_6() -> (Outcome, Option<Gelfond>) {
    let start = Instant::now();
    let (inst, params) = demo_spec().load(Some(PREC)).unwrap();
    let shape = (params.h, params.m, params.n, params.q, params.t, params.rows()) == (2, 6, 12, 12, 144, 72);
    let run = || -> gs_core::Result<_> {
        let consts = compute_constants(&inst, &params)?;
        let (matrix, _) = build_cleared_matrix(&inst, &params, &consts)?;
        let sol = solve_coefficients(&inst, &params, &matrix, &consts)?;
        let witness = minimal_nonvanishing_order(&inst, &params, &sol.eta)?;
        let norm = norm_lower_bound_check(&inst, &params, &witness)?;
        let house_rho = house_rho_upper_check(&params, &witness, &consts)?;
        let (chain, _) = with_precision_retry(PREC, |p| bound_chain_report(&inst, &params, &sol.eta, &witness, &consts, p));
        Ok((consts, sol, witness, norm, house_rho, chain?))
    };
    let (_, sol, witness, norm, house_rho, chain) = match run() {
        Ok(v) => v,
        Err(e) => return (Outcome::error(e), None),
    };
    let vanish = verify_vanishing(&inst, &params, &sol.eta);
    let r1 = eval_r_derivative(&inst, &params, &sol.eta, 0, &CBall::from_int(PREC, 1), PREC).map(|v| v.excludes_zero());
    let t = start.elapsed();
    let ok = shape
        && vanish
        && sol.vanishing_verified
        && sol.house_bound_ok()
        && witness.r >= 12
        && norm.holds()
        && house_rho.flags().holds()
        && chain.separation_holds
        && t < GELFOND_BUDGET;
    let detail = format!(
        "72 rows vanish {vanish}, house(η) 10^{:.1} ≤ 10^{:.1} {}, r = {}, l0 = {}, norm bound {}, house(ρ) flags {:?}, \
         separation {} ≥ {} {}, chain flags {:?}, R(1) ≠ 0 {:?}, Siegel bound met {}, {}",
        sol.house_bound.lhs_log10,
        sol.house_bound.rhs_log10,
        sol.house_bound_ok(),
        witness.r,
        witness.l0,
        norm.holds(),
        house_rho.flags(),
        chain.separation_exact,
        chain.separation_target,
        chain.separation_holds,
        chain.flags(),
        r1.as_ref().ok(),
        sol.siegel.bound_satisfied,
        secs(t),
    );
    (Outcome::new(ok, detail), Some(Gelfond { inst, params, sol, witness }))
}

fn criterion_7(g: &Gelfond, rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let contour = match Contour::for_order(g.params.m, g.witness.r, g.params.q) {
        Ok(c) => c,
        Err(e) => return Outcome::error(e),
    };
    let reach = contour.radius.to_f64() / 4.0;
    let ws: Vec<CBall> = (0..CAUCHY_POINTS)
        .map(|_| {
            let rad = reach * rng.gen::<f64>().sqrt();
            let th = rng.gen_range(0.0..std::f64::consts::TAU);
            CBall::point(Float::with_val(PREC, rad * th.cos()), Float::with_val(PREC, rad * th.sin()))
        })
        .collect();
    let checks = match cauchy_self_test_auto(&g.inst, &g.params, &g.sol.eta, &contour, &ws, CAUCHY_MAX_WIDTH) {
        Ok(c) => c,
        Err(e) => return Outcome::error(e),
    };
    let ok = checks.len() == CAUCHY_POINTS
        && checks.iter().all(|c| c.overlap && c.integral_width < CAUCHY_MAX_WIDTH && c.direct_width < CAUCHY_MAX_WIDTH);
    let widest = checks.iter().map(|c| c.integral_width.max(c.direct_width)).fold(0.0, f64::max);
    let c0 = &checks[0];
    Outcome::new(
        ok,
        format!(
            "{} points within |w| ≤ {reach}, all overlap {}, widest {widest:.2e}, {} nodes at {} bits, {}",
            checks.len(),
            checks.iter().all(|c| c.overlap),
            c0.nodes,
            c0.precision_bits,
            secs(start.elapsed())
        ),
    )
}

fn criterion_8(g: &Gelfond) -> Outcome {
    let start = Instant::now();
    let consts = match compute_constants(&g.inst, &g.params) {
        Ok(c) => c,
        Err(e) => return Outcome::error(e),
    };
    let all_present = (1..=15).all(|i| consts.entries.contains_key(format!("c{i}").as_str()));
    let th = match instance_threshold(&g.inst, &g.params) {
        Ok((_, th)) => th,
        Err(e) => return Outcome::error(e),
    };
    let t = start.elapsed();
    let ok = all_present && consts.c7_forms_agree && th.certified() && th.n_of_q_required_ge_r_star.holds() && t < CONSTANTS_BUDGET;
    Outcome::new(
        ok,
        format!(
            "c1..c15 present {all_present}, c7 forms agree {}, log10 c15 ≤ {:.2}, log10 r* ≈ {:.2} certified {}, \
             log10 q_required ≈ {:.2}, n(q_required) ≥ r* {:?}, instance n ≥ r* {:?}, {}",
            consts.c7_forms_agree,
            consts.log10_upper("c15"),
            th.r_star_log10,
            th.certified(),
            th.q_required_log10,
            th.n_of_q_required_ge_r_star,
            th.n_ge_r_star,
            secs(t),
        ),
    )
}

fn criterion_9() -> Outcome {
    let k = sqrt2();
    let inst = |a: &str, b: &str, g: &str, mode| GSInstance::new(1, parse_element(&k, a).unwrap(), parse_element(&k, b).unwrap(), parse_element(&k, g).unwrap(), mode).unwrap();
    let irrational = check_injectivity(&inst("x", "x", "3/2", Mode::Gelfond), &derive_params(2, 12, ParamMode::Gelfond).unwrap());
    let half = inst("2", "1/2", "x", Mode::Synthetic);
    let p2 = derive_params(2, 2, ParamMode::Synthetic { m: 1, n: 1 }).unwrap();
    let p4 = derive_params(2, 4, ParamMode::Synthetic { m: 2, n: 2 }).unwrap();
    let at2 = check_injectivity(&half, &p2);
    let at4 = check_injectivity(&half, &p4);
    let coll = exponent_collisions(&half, &p4);
    let named = coll.iter().any(|&(x, y)| (x, y) == ((1, 4), (2, 2)) || (x, y) == ((2, 2), (1, 4)));
    Outcome::new(
        irrational && at2 && !at4 && named,
        format!("√2 at q = 12: {irrational}, 1/2 at q = 2: {at2}, 1/2 at q = 4: {at4} (collisions {coll:?})"),
    )
}

fn line(n: u32, o: &Outcome) {
    println!("criterion {n}: {} | {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
}

fn main() -> ExitCode {
    // Tolerate the libtest flags cargo passes to every test binary.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut unexpected = Vec::new();
    let check = |unexpected: &mut Vec<u32>, n: u32, o: &Outcome| {
        line(n, o);
        if !o.pass {
            unexpected.push(n);
        }
    };
    check(&mut unexpected, 1, &criterion_1(&mut rng));
    check(&mut unexpected, 2, &criterion_2(&mut rng));
    check(&mut unexpected, 3, &criterion_3(&mut rng));
    check(&mut unexpected, 4, &criterion_4(&mut rng));

    let (rest, injective) = criterion_5();
    let five = Outcome::new(rest.pass && injective, rest.detail.clone());
    line(5, &five);
    if !rest.pass {
        unexpected.push(5);
    }
    if injective {
        println!("  note: injectivity at β = 1/2, q = 4 unexpectedly holds");
        unexpected.push(5);
    } else if rest.pass {
        println!("  note: known failure, only the injectivity sub-check fails ((1,4) and (2,2) share exponent 3); all other sub-checks pass");
    }

    let (six, g) = criterion_6();
    check(&mut unexpected, 6, &six);
    match &g {
        Some(g) => {
            check(&mut unexpected, 7, &criterion_7(g, &mut rng));
            check(&mut unexpected, 8, &criterion_8(g));
        }
        None => {
            check(&mut unexpected, 7, &Outcome::new(false, "skipped: criterion 6 produced no solution"));
            check(&mut unexpected, 8, &Outcome::new(false, "skipped: criterion 6 produced no solution"));
        }
    }
    check(&mut unexpected, 9, &criterion_9());

    if unexpected.is_empty() {
        println!("acceptance: all criteria as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcomes in criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
