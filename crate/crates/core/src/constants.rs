//! The explicit constants `c₁ … c₁₅` and the contradiction threshold.
//!
//! Constants are carried as enclosures of their natural logarithms, since
//! most of them overflow any practical exponent range. All formulas are
//! monotone in their inputs, so interval evaluation yields valid bounds.

use std::collections::BTreeMap;

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::auxfun::{AuxParams, GSInstance};
use crate::ball::Interval;
use crate::error::{Error, Result};
use crate::numfield::basis_repr_constant;
use crate::report::{ln_int, ln_pos, ln_rational, ln_to_log10_lower, ln_to_log10_upper, ln_u, Flag};

#[derive(Clone, Debug)]
pub struct Constant {
    /// Enclosure of `ln cᵢ`.
    pub ln: Interval,
    pub exact: Option<Integer>,
    pub formula: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantJson {
    pub log10_upper: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub formula: &'static str,
}

#[derive(Clone, Debug)]
pub struct ConstantsTable {
    prec: u32,
    /// Denominator-clearing integer; plays the role of `c₁` in every formula below.
    pub c_den: Integer,
    /// Basis-representation constant of the power basis (the Siegel `c₁`).
    pub c_basis: Integer,
    pub entries: BTreeMap<&'static str, Constant>,
    /// `ln c₇` from the nested product as displayed.
    pub c7_literal_ln: Interval,
    /// Literal and simplified forms of `c₇` overlap.
    pub c7_forms_agree: bool,
}

impl ConstantsTable {
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Enclosure of `ln c` for a named constant, e.g. `"c4"`.
    pub fn ln(&self, name: &str) -> Interval {
        self.entries.get(name).unwrap_or_else(|| panic!("unknown constant {name}")).ln.clone()
    }

    pub fn log10_upper(&self, name: &str) -> f64 {
        ln_to_log10_upper(&self.ln(name))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, c) in &self.entries {
            let j = ConstantJson {
                log10_upper: ln_to_log10_upper(&c.ln),
                exact: c.exact.as_ref().map(Integer::to_string),
                formula: c.formula,
            };
            map.insert((*k).to_string(), serde_json::to_value(j).unwrap());
        }
        serde_json::json!({
            "c_den": self.c_den.to_string(),
            "c_basis": self.c_basis.to_string(),
            "c1_role": "c_den in c2..c15; c_basis in the Siegel bound",
            "c7_literal_log10_upper": ln_to_log10_upper(&self.c7_literal_ln),
            "c7_forms_agree": self.c7_forms_agree,
            "c9_note": "|1 + |beta|| read as 1 + |sigma(beta')|",
            "c11_note": "c11 = 1: on C, |z - k| >= mr/q gives the product term <= (1/m)^r (q/r)^(mr)",
            "constants": map,
        })
    }
}

/// Exact value of `c^e` when it has at most this many bits.
const EXACT_BITS: u64 = 256;

fn exact_pow(c: &Integer, e: u64) -> Option<Integer> {
    let bits = (c.significant_bits() as u64).saturating_mul(e);
    (bits <= EXACT_BITS).then(|| Integer::from(rug::ops::Pow::pow(&*c, e as u32)))
}

/// Inputs that the constants depend on, as enclosures.
#[derive(Clone, Debug)]
pub struct ConstantInputs {
    pub h: usize,
    pub m: usize,
    pub c_den: Integer,
    pub c_basis: Integer,
    pub house_alpha: Interval,
    pub house_beta: Interval,
    pub house_gamma: Interval,
    /// `|σβ′|`.
    pub abs_beta: Interval,
    /// `|Log σα′|`.
    pub abs_log_alpha: Interval,
}

impl ConstantInputs {
    pub fn from_instance(inst: &GSInstance, params: &AuxParams) -> Result<Self> {
        let s = inst.sigma_index();
        Ok(ConstantInputs {
            h: params.h,
            m: params.m,
            c_den: inst.c_den().clone(),
            c_basis: basis_repr_constant(inst.field())?,
            house_alpha: inst.alpha().house().value,
            house_beta: inst.beta().house().value,
            house_gamma: inst.gamma().house().value,
            abs_beta: inst.beta().embed(s).abs(),
            abs_log_alpha: inst.alpha().log_embed(s)?.abs(),
        })
    }
}

pub fn compute_constants(inst: &GSInstance, params: &AuxParams) -> Result<ConstantsTable> {
    constants_from_inputs(&ConstantInputs::from_instance(inst, params)?, inst.field().precision())
}

pub fn constants_from_inputs(inp: &ConstantInputs, prec: u32) -> Result<ConstantsTable> {
    let (h, m) = (inp.h as i64, inp.m as i64);
    let int = |x: i64| Interval::from_int(prec, x);
    let rat = |n: i64, d: i64| Interval::from_rational(prec, &Rational::from((n, d)));
    let zero = int(0);
    let c1 = ln_int(prec, &inp.c_den)?;
    let c1p1 = ln_int(prec, &Integer::from(&inp.c_den + 1))?;
    let ln_ha = ln_pos(&inp.house_alpha)?;
    let ln_hg = ln_pos(&inp.house_gamma)?;
    let ln_1hb = ln_pos(&inp.house_beta.add(&int(1)))?;
    let ln2m = ln_u(prec, 2 * m as u64);
    if inp.abs_log_alpha.contains_zero() {
        return Err(Error::PrecisionExhausted("|log alpha| not separated from 0".into()));
    }

    let mut e: BTreeMap<&'static str, Constant> = BTreeMap::new();
    let mut put = |name: &'static str, ln: Interval, exact: Option<Integer>, formula: &'static str| {
        e.insert(name, Constant { ln: ln.clone(), exact, formula });
        ln
    };

    put("c1", c1.clone(), Some(inp.c_den.clone()), "c_den (denominator-clearing integer)");
    let two_m2 = 2 * m * m;
    let c2 = put("c2", c1.mul(&int(2 + 8 * m * m)), exact_pow(&inp.c_den, (2 + 8 * m * m) as u64), "|c1|^(2+8m^2)");
    let prod = ln_ha.add(&ln_hg).mul(&int(two_m2));
    let c3 = put(
        "c3",
        c2.add(&ln_1hb).add(&ln2m.mul(&rat(1, 2))).add(&prod.max(&zero)),
        None,
        "c2 (1 + house beta') sqrt(2m) max{1, house alpha'^(2m^2) house gamma'^(2m^2)}",
    );
    let c4 = put(
        "c4",
        ln2m.add(&c1.mul(&int(2))).max(&zero).add(&c3),
        None,
        "max{1, 2m c1^2} c3",
    );
    let c5 = put(
        "c5",
        c1p1.mul(&int(h * (1 + 4 * m * m))),
        exact_pow(&Integer::from(&inp.c_den + 1), (h * (1 + 4 * m * m)) as u64),
        "(|c1| + 1)^(h(1+4m^2))",
    );
    let c6 = put("c6", c1.add(&ln_1hb), None, "|c1| (1 + house beta')");

    // Displayed nesting (|c1|·|c1|·(|c1|·(house α′·(|c1|·house γ′))))^m, evaluated as written.
    let cd = Interval::from_integer(prec, &inp.c_den);
    let inner = cd.mul(&inp.house_gamma);
    let inner = inp.house_alpha.mul(&inner);
    let inner = cd.mul(&inner);
    let nested = cd.mul(&cd).mul(&inner);
    let c7_literal_ln = ln_pos(&nested)?.mul(&int(m));
    let c7 = put(
        "c7",
        c1.mul(&int(4)).add(&ln_ha).add(&ln_hg).mul(&int(m)),
        None,
        "(|c1|^4 house alpha' house gamma')^m",
    );
    let c7_forms_agree = c7.overlaps(&c7_literal_ln);
    let c8 = put(
        "c8",
        c6.add(&ln2m.mul(&rat(1, 2))).add(&c7.mul(&int(2 * m))).add(&c4).add(&ln2m),
        None,
        "c6 sqrt(2m) c7^(2m) c4 2m",
    );
    let c9 = put(
        "c9",
        inp.abs_beta.add(&int(1)).mul(&inp.abs_log_alpha).mul(&int(m)),
        None,
        "exp((1 + |beta|) |log alpha| m)",
    );
    let c10 = put("c10", ln2m.add(&c4).add(&c9.mul(&int(1 + 2 * m))), None, "2m c4 c9^(1+2m)");
    let c11 = put("c11", zero.clone(), Some(Integer::from(1)), "1 (separation bound)");
    let c12 = put("c12", ln2m.mul(&rat(m, 2)).add(&c10).add(&c11), None, "(2m)^(m/2) c10 c11");
    let inv_log = int(1).div(&inp.abs_log_alpha)?.add(&int(1));
    let c13 = put(
        "c13",
        ln_pos(&inv_log)?.add(&ln_u(prec, m as u64)).add(&ln_rational(prec, &Rational::from((2 * m + 1, m)))?).add(&c12),
        None,
        "(|log alpha|^-1 + 1) m (2 + 1/m) c12",
    );
    let c14 = put("c14", c8.mul(&int(h - 1)).add(&c13), None, "c8^(h-1) c13");
    put("c15", c14.add(&c5), None, "c14 c5");

    Ok(ConstantsTable { prec, c_den: inp.c_den.clone(), c_basis: inp.c_basis.clone(), entries: e, c7_literal_ln, c7_forms_agree })
}

/// Smallest `r*` with `((r − 3h)/2)·ln r > r·ln c₁₅` for every `r ≥ r*`.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    /// Decimal `r*` when it has at most 40 digits.
    pub r_star: Option<String>,
    pub r_star_log10: f64,
    /// `f(r*) > 0`.
    pub positive_at_r_star: bool,
    /// `f(r* − 1) ≤ 0` (vacuous when `r* = 1`).
    pub nonpositive_before: bool,
    /// `f′(r*) > 0`; with `f″ > 0` this makes `f` increasing beyond `r*`.
    pub derivative_positive: bool,
    /// `f′ > 0` at sampled points of `[r*, 2r*]`.
    pub samples_positive: bool,
    /// `q_required = 12·m·h·⌈c₁₅⁴⌉`, exact when small.
    pub q_required: Option<String>,
    pub q_required_log10: f64,
    /// `n(q_required) = q_required²/(2m) ≥ r*`.
    pub n_of_q_required_ge_r_star: Flag,
    /// The instance's own `n ≥ r*`.
    pub n_ge_r_star: Flag,
}

impl ThresholdReport {
    pub fn certified(&self) -> bool {
        self.positive_at_r_star && self.nonpositive_before && self.derivative_positive && self.samples_positive
    }
}

/// Difference `f(r) = ((r − 3h)/2) ln r − r L` with `L = ln c₁₅`, and its derivative.
struct Diff {
    h: i64,
    l: Interval,
}

impl Diff {
    fn f(&self, r: &Integer, prec: u32) -> Interval {
        let ri = Interval::from_integer(prec, r);
        let lnr = ri.ln().unwrap();
        ri.sub(&Interval::from_int(prec, 3 * self.h)).mul(&lnr).mul(&half(prec)).sub(&ri.mul(&self.l))
    }

    /// `f′(r) = ½ ln r + ½ − 3h/(2r) − L`.
    fn df(&self, r: &Integer, prec: u32) -> Interval {
        let ri = Interval::from_integer(prec, r);
        let lnr = ri.ln().unwrap();
        let t = Interval::from_int(prec, 3 * self.h).div(&ri.mul(&Interval::from_int(prec, 2))).unwrap();
        lnr.add(&Interval::from_int(prec, 1)).mul(&half(prec)).sub(&t).sub(&self.l)
    }
}

fn half(prec: u32) -> Interval {
    Interval::from_rational(prec, &Rational::from((1, 2)))
}

fn positive(x: &Interval) -> Option<bool> {
    if x.lo() > &0 {
        Some(true)
    } else if x.hi() <= &0 {
        Some(false)
    } else {
        None
    }
}

/// Smallest integer `r ≥ lo` with `pred(r)`, for a predicate monotone on
/// `[lo, ∞)`. The search gallops outward from `guess`, so a good guess costs
/// only a handful of evaluations.
fn first_true(lo: Integer, guess: Integer, mut pred: impl FnMut(&Integer) -> Result<bool>) -> Result<Integer> {
    let start = if guess < lo { lo.clone() } else { guess };
    let (mut bad, mut good);
    if pred(&start)? {
        good = start;
        let mut step = Integer::from(1);
        loop {
            let cand = Integer::from(&good - &step);
            if cand < lo {
                if pred(&lo)? {
                    return Ok(lo);
                }
                bad = lo;
                break;
            }
            if pred(&cand)? {
                good = cand;
                step <<= 1;
            } else {
                bad = cand;
                break;
            }
        }
    } else {
        bad = start;
        let mut step = Integer::from(1);
        good = loop {
            let cand = Integer::from(&bad + &step);
            if pred(&cand)? {
                break cand;
            }
            bad = cand;
            step <<= 1;
        };
    }
    while Integer::from(&good - &bad) > 1 {
        let mid: Integer = Integer::from(&good + &bad) >> 1;
        if pred(&mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Newton iteration in `s = ln r` for a root of `g`, returning `round(e^s)`.
/// Only a starting point for [`first_true`]; correctness never depends on it.
fn newton_guess(prec: u32, s0: f64, g: impl Fn(&Float) -> (Float, Float)) -> Integer {
    let mut s = Float::with_val(prec, s0.max(0.0));
    for _ in 0..200 {
        let (v, dv) = g(&s);
        if dv.is_zero() || !v.is_finite() || !dv.is_finite() {
            break;
        }
        let step = Float::with_val(prec, &v / &dv);
        s -= &step;
        if s < 0 {
            s = Float::with_val(prec, 0);
        }
        if step.is_zero() || step.clone().abs().get_exp().unwrap_or(0) < -(prec as i32) + 8 {
            break;
        }
    }
    let r = Float::with_val(prec, s.exp_ref()).round();
    r.to_integer().filter(|r| *r >= 1).unwrap_or_else(|| Integer::from(1))
}

/// Locates and certifies the threshold `r*` for `c₁₅`.
///
/// `f` is convex for `r > 0` (`f″ = 1/(2r) + 3h/(2r²)`), so `f′` is
/// increasing and the integers where `f ≤ 0` form an interval. Working
/// precision grows with `log₂ r*` so integer resolution is never lost.
pub fn contradiction_threshold(consts: &ConstantsTable, h: usize, m: usize, n: usize) -> Result<ThresholdReport> {
    let ln15 = consts.ln("c15");
    threshold_for(&ln15, h, m, n, consts.precision())
}

/// Bits of `ln c₁₅` needed to resolve integers near `r* ≈ c₁₅²`.
fn resolution_bits(ln_c15: &Interval) -> u32 {
    (ln_c15.hi().to_f64().max(0.0) * 2.0 / std::f64::consts::LN_2) as u32 + 128
}

/// Threshold for an instance. The integer `r*` is only determined when
/// `ln c₁₅` is known to about `log₂ r*` bits, so the constants are
/// recomputed from the instance at higher precision until the search decides.
pub fn instance_threshold(inst: &GSInstance, params: &AuxParams) -> Result<(ConstantsTable, ThresholdReport)> {
    let mut consts = compute_constants(inst, params)?;
    let need = resolution_bits(&consts.ln("c15"));
    let cap = (need * 8).max(4096);
    let mut prec = inst.field().precision();
    loop {
        match contradiction_threshold(&consts, params.h, params.m, params.n) {
            Err(Error::PrecisionExhausted(_)) if prec < cap => {
                prec = (prec * 2).max(need).min(cap);
                consts = compute_constants(&inst.with_precision(prec)?, params)?;
            }
            other => return other.map(|t| (consts, t)),
        }
    }
}

pub fn threshold_for(ln_c15: &Interval, h: usize, m: usize, n: usize, base_prec: u32) -> Result<ThresholdReport> {
    // r* ≈ c₁₅² so about 2·log₂ c₁₅ bits of resolution are needed.
    let need = resolution_bits(ln_c15);
    let mut prec = need.max(base_prec);
    loop {
        match threshold_at(ln_c15, h, m, n, prec) {
            Err(Error::PrecisionExhausted(_)) if prec < need * 8 => prec *= 2,
            other => return other,
        }
    }
}

fn threshold_at(ln_c15: &Interval, h: usize, m: usize, n: usize, prec: u32) -> Result<ThresholdReport> {
    let l = Interval::new(Float::with_val(prec, ln_c15.lo()), Float::with_val(prec, ln_c15.hi()));
    let d = Diff { h: h as i64, l };
    let undecided = || Error::PrecisionExhausted("sign of the threshold difference undecided".into());
    let sign = |x: Interval| positive(&x).ok_or_else(undecided);

    let lmid = Float::with_val(prec, d.l.lo() + d.l.hi()) / 2u32;
    let three_h = Float::with_val(prec, 3 * h as u64);
    // f′ in s = ln r: ½s + ½ − (3h/2)e^{−s} − L.
    let g0 = newton_guess(prec, 2.0 * lmid.to_f64() - 1.0, |s| {
        let e = Float::with_val(prec, -s).exp() * &three_h / 2u32;
        (Float::with_val(prec, s / 2u32) + 0.5f64 - &e - &lmid, Float::with_val(prec, 0.5f64 + &e))
    });
    let r0 = first_true(Integer::from(1), g0, |r| sign(d.df(r, prec)))?;
    // The integer minimum of f sits at r0 − 1 or r0.
    let mut min_f = d.f(&r0, prec);
    if r0 > 1 {
        min_f = interval_min(&min_f, &d.f(&Integer::from(&r0 - 1), prec));
    }
    if sign(min_f)? {
        return Err(Error::NoThreshold);
    }
    // f/r in s = ln r: ½(1 − 3h e^{−s}) s − L.
    let s_r0 = Float::with_val(prec, Float::with_val(prec, &r0).ln_ref()).to_f64();
    let g1 = newton_guess(prec, s_r0.max(2.0 * lmid.to_f64()) + 2.0, |s| {
        let e = Float::with_val(prec, -s).exp() * &three_h;
        let a = Float::with_val(prec, 1u32 - &e) / 2u32;
        let v = Float::with_val(prec, &a * s) - &lmid;
        let dv = a + Float::with_val(prec, &e * s) / 2u32;
        (v, dv)
    });
    let r_star = first_true(r0.clone(), g1, |r| sign(d.f(r, prec)))?;

    let positive_at = sign(d.f(&r_star, prec))?;
    let nonpos_before = r_star == 1 || !sign(d.f(&Integer::from(&r_star - 1), prec))?;
    let deriv = sign(d.df(&r_star, prec))?;
    let mut samples = true;
    for k in 0..=16u32 {
        let r = Integer::from(&r_star * (16 + k)) / 16u32;
        samples &= sign(d.df(&r, prec))?;
    }

    let r_int = Interval::from_integer(prec, &r_star);
    let ln_rstar = r_int.ln()?;
    let r_star_log10 = ln_to_log10_upper(&ln_rstar);
    let digits = r_star.to_string();

    // q_required = 12mh⌈c₁₅⁴⌉ ≥ 12mh·c₁₅⁴.
    let twelve_mh = Integer::from(12 * m as u64 * h as u64);
    let ln_q_lo = ln_int(prec, &twelve_mh)?.add(&ln_c15.mul(&Interval::from_int(prec, 4)));
    let c15_4_log10 = ln_to_log10_upper(&ln_c15.mul(&Interval::from_int(prec, 4)));
    let q_required = if c15_4_log10 <= 18.0 {
        let c4 = ln_c15.mul(&Interval::from_int(prec, 4)).exp();
        let ceil = c4.hi().clone().ceil().to_integer().unwrap();
        Some(Integer::from(&twelve_mh * &ceil).to_string())
    } else {
        None
    };
    // n(q) = q²/(2m): compare ln n(q_required) against ln r*.
    let ln_n_q = ln_q_lo.mul(&Interval::from_int(prec, 2)).sub(&ln_u(prec, 2 * m as u64));
    let n_q_flag = cmp_ge(&ln_n_q, &ln_rstar);
    let n_flag = Flag::from_bool(Integer::from(n) >= r_star);

    Ok(ThresholdReport {
        r_star: (digits.len() <= 40).then_some(digits),
        r_star_log10,
        positive_at_r_star: positive_at,
        nonpositive_before: nonpos_before,
        derivative_positive: deriv,
        samples_positive: samples,
        q_required,
        q_required_log10: ln_to_log10_lower(&ln_q_lo),
        n_of_q_required_ge_r_star: n_q_flag,
        n_ge_r_star: n_flag,
    })
}

fn cmp_ge(lhs: &Interval, rhs: &Interval) -> Flag {
    if lhs.lo() >= rhs.hi() {
        Flag::Holds
    } else if lhs.hi() < rhs.lo() {
        Flag::Fails
    } else {
        Flag::Undecided
    }
}

/// Enclosure of `min(a, b)`.
fn interval_min(a: &Interval, b: &Interval) -> Interval {
    let lo = if a.lo() < b.lo() { a.lo() } else { b.lo() };
    let hi = if a.hi() < b.hi() { a.hi() } else { b.hi() };
    Interval::new(lo.clone(), hi.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_of(x: f64) -> Interval {
        Interval::point(Float::with_val(128, x)).ln().unwrap()
    }

    #[test]
    fn threshold_unit_constant() {
        let t = threshold_for(&Interval::from_int(128, 0), 2, 6, 12, 128).unwrap();
        assert_eq!(t.r_star.as_deref(), Some("7"));
        assert!(t.certified());
        assert_eq!(t.n_ge_r_star, Flag::Holds);
    }

    #[test]
    fn threshold_e() {
        // Oracle: smallest r with (r − 6) ln r > 2r.
        let t = threshold_for(&Interval::from_int(128, 1), 2, 6, 12, 128).unwrap();
        assert_eq!(t.r_star.as_deref(), Some("19"));
        assert!(t.certified());
    }

    #[test]
    fn no_threshold_for_small_c15() {
        assert_eq!(threshold_for(&ln_of(0.01), 1, 4, 1, 128).unwrap_err(), Error::NoThreshold);
    }

    #[test]
    fn huge_threshold() {
        let t = threshold_for(&Interval::from_int(128, 3000), 2, 6, 12, 128).unwrap();
        assert!(t.certified());
        assert!(t.r_star.is_none());
        assert!((t.r_star_log10 - 2.0 * 3000.0 / std::f64::consts::LN_10).abs() < 5.0);
        assert_eq!(t.n_of_q_required_ge_r_star, Flag::Holds);
    }
}
