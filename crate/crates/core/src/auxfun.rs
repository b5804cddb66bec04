//! The auxiliary-function system: instances, parameters, the cleared
//! `mn × q²` system over the order, its Siegel solution `η`, the minimal
//! non-vanishing order `r` and the element `ρ`.
//!
//! Everything here is exact; enclosures appear only in house reports.

use std::collections::HashMap;
use std::sync::Arc;

use rug::{Integer, Rational};
use serde::Serialize;
use serde_json::Value;

use crate::ball::Interval;
use crate::constants::ConstantsTable;
use crate::error::{Error, Result};
use crate::numfield::parse::element_from_json;
use crate::numfield::{FieldSpec, NFElement, NumberField};
use crate::report::{ln_pos, ln_u, Comparison, Flag};
use crate::siegel::{siegel_ok, SolveMethod};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `m = 2h + 2`, `n = q²/2m`, β′ irrational.
    Gelfond,
    /// Caller-chosen `m`, `n`; used where `σγ′ = σα′^β` holds exactly.
    Synthetic,
}

/// Hypotheses of the construction, with `σ` fixed by index.
#[derive(Clone, Debug)]
pub struct GSInstance {
    field: Arc<NumberField>,
    sigma_index: usize,
    alpha: NFElement,
    beta: NFElement,
    gamma: NFElement,
    c_den: Integer,
    mode: Mode,
}

impl GSInstance {
    pub fn new(sigma_index: usize, alpha: NFElement, beta: NFElement, gamma: NFElement, mode: Mode) -> Result<Self> {
        let field = alpha.field().clone();
        let beta = beta.in_field(&field);
        let gamma = gamma.in_field(&field);
        if sigma_index >= field.degree() {
            return Err(Error::InvalidInstance(format!(
                "sigma_index {sigma_index} out of range for degree {}",
                field.degree()
            )));
        }
        // σ is injective, so σα ∉ {0, 1} is decided exactly in K.
        if alpha.is_zero() || alpha == NFElement::one(&field) {
            return Err(Error::InvalidInstance("alpha must differ from 0 and 1".into()));
        }
        let sa = alpha.embed(sigma_index);
        if !sa.excludes_zero() || !sa.sub(&crate::ball::CBall::one(field.precision())).excludes_zero() {
            return Err(Error::PrecisionExhausted("sigma(alpha) not separated from 0 and 1".into()));
        }
        if gamma.is_zero() {
            return Err(Error::InvalidInstance("gamma must be nonzero".into()));
        }
        if mode == Mode::Gelfond && beta.minpoly().degree() < Some(2) {
            return Err(Error::InvalidInstance("beta must be irrational in gelfond mode".into()));
        }
        let mut c_den = Integer::from(1);
        for x in [&alpha, &beta, &gamma] {
            c_den.lcm_mut(&x.denominator_clearing_integer());
        }
        for (name, x) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma)] {
            let cleared = x.scale_int(&c_den);
            if !cleared.has_integer_coords() {
                return Err(Error::NotIntegral(format!(
                    "{c_den}·{name} is integral but outside the power-basis order"
                )));
            }
        }
        Ok(GSInstance { field, sigma_index, alpha, beta, gamma, c_den, mode })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn sigma_index(&self) -> usize {
        self.sigma_index
    }

    pub fn alpha(&self) -> &NFElement {
        &self.alpha
    }

    pub fn beta(&self) -> &NFElement {
        &self.beta
    }

    pub fn gamma(&self) -> &NFElement {
        &self.gamma
    }

    pub fn c_den(&self) -> &Integer {
        &self.c_den
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The same instance over the field recomputed at another precision.
    pub fn with_precision(&self, prec: u32) -> Result<GSInstance> {
        let field = self.field.with_precision(prec)?;
        Ok(GSInstance {
            alpha: self.alpha.in_field(&field),
            beta: self.beta.in_field(&field),
            gamma: self.gamma.in_field(&field),
            field,
            ..self.clone()
        })
    }
}

/// Parsed instance file.
#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub field: FieldSpec,
    pub alpha: Value,
    pub beta: Value,
    pub gamma: Value,
    pub sigma_index: usize,
    pub q: u32,
    pub mode: Mode,
    pub m: Option<u32>,
    pub n: Option<u32>,
    /// The file as given, echoed into reports.
    pub raw: Value,
}

impl InstanceSpec {
    pub fn from_json(v: &Value) -> Result<InstanceSpec> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("instance is missing \"{k}\"")));
        let uint = |k: &str| -> Result<Option<u32>> {
            match v.get(k) {
                None | Some(Value::Null) => Ok(None),
                Some(x) => x
                    .as_u64()
                    .and_then(|u| u32::try_from(u).ok())
                    .map(Some)
                    .ok_or_else(|| Error::Parse(format!("\"{k}\" must be a non-negative integer"))),
            }
        };
        let mode = match v.get("mode").and_then(Value::as_str).unwrap_or("gelfond") {
            "gelfond" => Mode::Gelfond,
            "synthetic" => Mode::Synthetic,
            other => return Err(Error::Parse(format!("unknown mode {other:?}"))),
        };
        Ok(InstanceSpec {
            field: FieldSpec::from_json(get("field")?)?,
            alpha: get("alpha")?.clone(),
            beta: get("beta")?.clone(),
            gamma: get("gamma")?.clone(),
            sigma_index: uint("sigma_index")?.unwrap_or(0) as usize,
            q: uint("q")?.ok_or_else(|| Error::Parse("instance is missing \"q\"".into()))?,
            mode,
            m: uint("m")?,
            n: uint("n")?,
            raw: v.clone(),
        })
    }

    /// Builds the field, the instance and its parameters.
    pub fn load(&self, precision: Option<u32>) -> Result<(GSInstance, AuxParams)> {
        let field = self.field.build(precision)?;
        let alpha = element_from_json(&field, &self.alpha)?;
        let beta = element_from_json(&field, &self.beta)?;
        let gamma = element_from_json(&field, &self.gamma)?;
        let inst = GSInstance::new(self.sigma_index, alpha, beta, gamma, self.mode)?;
        let pm = match self.mode {
            Mode::Gelfond => ParamMode::Gelfond,
            Mode::Synthetic => ParamMode::Synthetic {
                m: self.m.ok_or_else(|| Error::Parse("synthetic mode needs \"m\"".into()))?,
                n: self.n.ok_or_else(|| Error::Parse("synthetic mode needs \"n\"".into()))?,
            },
        };
        let params = derive_params(field.degree(), self.q, pm)?;
        Ok((inst, params))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamMode {
    Gelfond,
    Synthetic { m: u32, n: u32 },
}

/// Sizes of the system: `mn` equations in `t = q²` unknowns.
///
/// Rows are indexed by `(k, l)` with `k` major, columns by `(a, b)` with `a` major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuxParams {
    pub h: usize,
    pub m: usize,
    pub n: usize,
    pub q: usize,
    pub t: usize,
}

impl AuxParams {
    pub fn rows(&self) -> usize {
        self.m * self.n
    }

    /// Row of equation `(k, l)`, `0 ≤ k < n`, `1 ≤ l ≤ m`.
    pub fn row_index(&self, k: usize, l: usize) -> usize {
        debug_assert!(k < self.n && (1..=self.m).contains(&l));
        k * self.m + (l - 1)
    }

    pub fn row_pair(&self, row: usize) -> (usize, usize) {
        (row / self.m, row % self.m + 1)
    }

    /// Column of unknown `(a, b)`, `1 ≤ a, b ≤ q`.
    pub fn col_index(&self, a: usize, b: usize) -> usize {
        debug_assert!((1..=self.q).contains(&a) && (1..=self.q).contains(&b));
        (a - 1) * self.q + (b - 1)
    }

    pub fn col_pair(&self, col: usize) -> (usize, usize) {
        (col / self.q + 1, col % self.q + 1)
    }

    /// Exponent `n − 1 + 2mq` of the clearing factor.
    pub fn clearing_exponent(&self) -> usize {
        self.n - 1 + 2 * self.m * self.q
    }
}

pub fn derive_params(h: usize, q: u32, mode: ParamMode) -> Result<AuxParams> {
    let q = q as usize;
    if q == 0 {
        return Err(Error::ParamError("q must be positive".into()));
    }
    let t = q * q;
    let (m, n) = match mode {
        ParamMode::Gelfond => {
            if h < 2 {
                return Err(Error::DegreeTooSmall(h));
            }
            let m = 2 * h + 2;
            if t % (2 * m) != 0 {
                return Err(Error::Divisibility { two_m: 2 * m as u64, q_squared: t as u64 });
            }
            (m, t / (2 * m))
        }
        ParamMode::Synthetic { m, n } => {
            let (m, n) = (m as usize, n as usize);
            if m == 0 || n == 0 {
                return Err(Error::ParamError("m and n must be positive".into()));
            }
            if 2 * m * n > t {
                return Err(Error::ParamError(format!("2mn = {} exceeds q² = {t}", 2 * m * n)));
            }
            (m, n)
        }
    };
    Ok(AuxParams { h, m, n, q, t })
}

/// Exact powers reused across the system.
pub(crate) struct CoefTable {
    /// `a + bβ′` per column.
    pub base: Vec<NFElement>,
    alpha_pow: Vec<NFElement>,
    gamma_pow: Vec<NFElement>,
    q: usize,
}

impl CoefTable {
    pub fn new(inst: &GSInstance, params: &AuxParams) -> Self {
        let f = inst.field();
        let q = params.q;
        let base = (0..params.t)
            .map(|c| {
                let (a, b) = params.col_pair(c);
                &NFElement::from_int(f, a as i64) + &inst.beta().scale(&Rational::from(b as u32))
            })
            .collect();
        let top = params.m * q;
        let powers = |x: &NFElement| {
            let mut v = vec![NFElement::one(f)];
            for j in 1..=top {
                v.push(&v[j - 1] * x);
            }
            v
        };
        CoefTable { base, alpha_pow: powers(inst.alpha()), gamma_pow: powers(inst.gamma()), q }
    }

    /// `α′^{al} γ′^{bl}` for column `col`.
    pub fn exp_part(&self, l: usize, col: usize) -> NFElement {
        let (a, b) = (col / self.q + 1, col % self.q + 1);
        &self.alpha_pow[a * l] * &self.gamma_pow[b * l]
    }
}

/// `(a + bβ′)^k α′^{al} γ′^{bl}`.
pub fn system_coefficient(inst: &GSInstance, k: usize, l: usize, a: usize, b: usize) -> NFElement {
    let f = inst.field();
    let base = &NFElement::from_int(f, a as i64) + &inst.beta().scale(&Rational::from(b as u32));
    &(&base.pow(k as u32) * &inst.alpha().pow((a * l) as u32)) * &inst.gamma().pow((b * l) as u32)
}

/// Largest entry house against `c₃ⁿ n^{(n−1)/2}`.
#[derive(Clone, Debug, Serialize)]
pub struct HouseReport {
    pub clearing_factor: String,
    pub max_entry_house: Comparison,
}

pub type OkMatrix = Vec<Vec<NFElement>>;

fn max_house_ln(elems: &[&NFElement], prec: u32) -> Result<Interval> {
    let mut best: Option<Interval> = None;
    for e in elems {
        if e.is_zero() {
            continue;
        }
        let hv = e.house().value;
        best = Some(match best {
            None => hv,
            Some(b) => b.max(&hv),
        });
    }
    match best {
        None => Ok(Interval::from_int(prec, 0)),
        Some(b) => ln_pos(&b),
    }
}

/// The system scaled by `c_den^{n−1+2mq}` so every entry lies in `ℤ[θ]`.
pub fn build_cleared_matrix(inst: &GSInstance, params: &AuxParams, consts: &ConstantsTable) -> Result<(OkMatrix, HouseReport)> {
    let f = inst.field();
    let clear = Integer::from(rug::ops::Pow::pow(&*inst.c_den(), params.clearing_exponent() as u32));
    let table = CoefTable::new(inst, params);
    let mut mat = vec![vec![NFElement::zero(f); params.t]; params.rows()];
    for col in 0..params.t {
        let mut pk = NFElement::from_rational(f, Rational::from(&clear));
        for k in 0..params.n {
            for l in 1..=params.m {
                mat[params.row_index(k, l)][col] = &pk * &table.exp_part(l, col);
            }
            pk = &pk * &table.base[col];
        }
    }
    for (r, row) in mat.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            if !e.has_integer_coords() {
                return Err(Error::NotIntegral(format!("cleared entry at row {r}, column {c}")));
            }
        }
    }
    let prec = f.precision();
    let lhs = max_house_ln(&mat.iter().flatten().collect::<Vec<_>>(), prec)?;
    let n = params.n as u64;
    let half = Interval::from_rational(prec, &Rational::from((n as i64 - 1, 2)));
    let rhs = consts.ln("c3").mul(&Interval::from_int(prec, n as i64)).add(&ln_u(prec, n).mul(&half));
    let report = HouseReport { clearing_factor: format!("{}^{}", inst.c_den(), params.clearing_exponent()), max_entry_house: Comparison::of_logs(&lhs, &rhs) };
    Ok((mat, report))
}

/// Siegel certificate in report form.
#[derive(Clone, Debug, Serialize)]
pub struct SiegelSummary {
    pub rows: usize,
    pub cols: usize,
    /// Columns dropped as exact duplicates of an earlier column.
    pub merged_columns: usize,
    pub claimed_log10: f64,
    pub achieved_log10: f64,
    pub bound_satisfied: bool,
    pub method: SolveMethod,
}

#[derive(Clone, Debug)]
pub struct EtaSolution {
    pub eta: Vec<NFElement>,
    pub siegel: SiegelSummary,
    /// Every equation `Σ_t η_t·(a+bβ′)^k α′^{al} γ′^{bl} = 0` checked exactly.
    pub vanishing_verified: bool,
    /// `max house η_t ≤ c₄ⁿ n^{(n+1)/2}`.
    pub house_bound: Comparison,
    /// The same against `c₄ⁿ n^{(n−1)/2}`.
    pub house_bound_pre_lift: Comparison,
}

impl EtaSolution {
    pub fn house_bound_ok(&self) -> bool {
        self.house_bound.holds.holds()
    }
}

/// Solves the cleared system with Siegel's lemma and verifies it exactly.
///
/// Columns that coincide exactly (possible only when `a + bβ′` repeats) are
/// solved once: the duplicates get `η = 0`. Otherwise every difference of
/// equal columns would be a kernel vector making `R` vanish identically.
pub fn solve_coefficients(inst: &GSInstance, params: &AuxParams, matrix: &OkMatrix, consts: &ConstantsTable) -> Result<EtaSolution> {
    let f = inst.field();
    let t = params.t;
    let mut reps: Vec<usize> = Vec::new();
    let mut seen: HashMap<Vec<Rational>, usize> = HashMap::new();
    for c in 0..t {
        let key: Vec<Rational> = matrix.iter().flat_map(|row| row[c].coords().iter().cloned()).collect();
        if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
            e.insert(c);
            reps.push(c);
        }
    }
    let reduced: OkMatrix = matrix.iter().map(|row| reps.iter().map(|&c| row[c].clone()).collect()).collect();
    let sol = siegel_ok(&reduced)?;
    let mut eta = vec![NFElement::zero(f); t];
    for (j, &c) in reps.iter().enumerate() {
        eta[c] = sol.vector[j].clone();
    }

    let vanishing_verified = verify_vanishing(inst, params, &eta);
    let prec = f.precision();
    let lhs = max_house_ln(&eta.iter().collect::<Vec<_>>(), prec)?;
    let n = params.n as i64;
    let c4n = consts.ln("c4").mul(&Interval::from_int(prec, n));
    let lnn = ln_u(prec, n as u64);
    let post = c4n.add(&lnn.mul(&Interval::from_rational(prec, &Rational::from((n + 1, 2)))));
    let pre = c4n.add(&lnn.mul(&Interval::from_rational(prec, &Rational::from((n - 1, 2)))));
    let siegel = SiegelSummary {
        rows: reduced.len() * f.degree(),
        cols: reps.len() * f.degree(),
        merged_columns: t - reps.len(),
        claimed_log10: sol.claimed_bound.log10_lower(),
        achieved_log10: sol.achieved.log10_upper(),
        bound_satisfied: sol.bound_satisfied,
        method: sol.method,
    };
    Ok(EtaSolution {
        eta,
        siegel,
        vanishing_verified,
        house_bound: Comparison::of_logs(&lhs, &post),
        house_bound_pre_lift: Comparison::of_logs(&lhs, &pre),
    })
}

/// Exact sums `Σ_t η_t (a+bβ′)^k α′^{al} γ′^{bl}` for `k` in `ks` and every `l`.
pub fn row_sums(inst: &GSInstance, params: &AuxParams, eta: &[NFElement], ks: std::ops::Range<usize>) -> Vec<Vec<NFElement>> {
    let table = CoefTable::new(inst, params);
    let f = inst.field();
    let exp: Vec<Vec<NFElement>> = (1..=params.m)
        .map(|l| (0..params.t).map(|c| if eta[c].is_zero() { NFElement::zero(f) } else { table.exp_part(l, c) }).collect())
        .collect();
    let mut w: Vec<NFElement> = eta.to_vec();
    let mut out = Vec::new();
    for k in 0..ks.end {
        if k >= ks.start {
            out.push(exp.iter().map(|e| sum_products(f, &w, e)).collect());
        }
        for (wi, b) in w.iter_mut().zip(&table.base) {
            if !wi.is_zero() {
                *wi = &*wi * b;
            }
        }
    }
    out
}

fn sum_products(f: &Arc<NumberField>, w: &[NFElement], e: &[NFElement]) -> NFElement {
    let mut acc = NFElement::zero(f);
    for (x, y) in w.iter().zip(e) {
        if !x.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

/// Every raw equation `(k, l)`, `k < n`, vanishes exactly.
pub fn verify_vanishing(inst: &GSInstance, params: &AuxParams, eta: &[NFElement]) -> bool {
    row_sums(inst, params, eta, 0..params.n).iter().flatten().all(NFElement::is_zero)
}

/// Whether the `t` values `a + bβ′` are pairwise distinct (exactly, in K).
pub fn check_injectivity(inst: &GSInstance, params: &AuxParams) -> bool {
    let table = CoefTable::new(inst, params);
    let mut seen = std::collections::HashSet::new();
    table.base.iter().all(|b| seen.insert(b.coords().to_vec()))
}

/// The pairs `(a, b)`, `(a′, b′)` with `a + bβ′ = a′ + b′β′`.
pub fn exponent_collisions(inst: &GSInstance, params: &AuxParams) -> Vec<((usize, usize), (usize, usize))> {
    let table = CoefTable::new(inst, params);
    let mut first: HashMap<Vec<Rational>, usize> = HashMap::new();
    let mut out = Vec::new();
    for (c, b) in table.base.iter().enumerate() {
        match first.get(b.coords()) {
            Some(&c0) => out.push((params.col_pair(c0), params.col_pair(c))),
            None => {
                first.insert(b.coords().to_vec(), c);
            }
        }
    }
    out
}

/// First `r ≥ n` with a nonzero exact sum, the least such `l₀ ∈ 1..=m`, and `ρ`.
#[derive(Clone, Debug)]
pub struct RhoWitness {
    pub r: usize,
    pub l0: usize,
    pub rho: NFElement,
    pub norm_rho: Rational,
}

pub fn order_search_cap(params: &AuxParams) -> usize {
    params.n + params.t + params.h * params.t
}

pub fn minimal_nonvanishing_order(inst: &GSInstance, params: &AuxParams, eta: &[NFElement]) -> Result<RhoWitness> {
    if eta.iter().all(NFElement::is_zero) {
        return Err(Error::ParamError("eta is zero".into()));
    }
    let f = inst.field();
    let table = CoefTable::new(inst, params);
    let exp: Vec<Vec<NFElement>> = (1..=params.m)
        .map(|l| (0..params.t).map(|c| if eta[c].is_zero() { NFElement::zero(f) } else { table.exp_part(l, c) }).collect())
        .collect();
    let mut w: Vec<NFElement> = eta.to_vec();
    let cap = order_search_cap(params);
    for k in 0..cap {
        if k >= params.n {
            for (li, e) in exp.iter().enumerate() {
                let s = sum_products(f, &w, e);
                if !s.is_zero() {
                    let norm_rho = s.norm();
                    return Ok(RhoWitness { r: k, l0: li + 1, rho: s, norm_rho });
                }
            }
        }
        for (wi, b) in w.iter_mut().zip(&table.base) {
            if !wi.is_zero() {
                *wi = &*wi * b;
            }
        }
    }
    Err(Error::OrderSearchExceeded { cap })
}

/// Exact integrality and norm certificate for `c^e·ρ`.
#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub exponent: usize,
    pub cleared_has_integer_coords: bool,
    pub cleared_norm: String,
    pub norm_rho: String,
    /// `|N(c^e ρ)| ≥ 1`, exact.
    pub cleared_norm_at_least_one: bool,
    /// `|N(ρ)| ≥ c^{−he}`, exact.
    pub implied_bound_holds: bool,
    /// `log₁₀ c^{−he}`.
    pub implied_lower_log10: f64,
    pub norm_log10: f64,
}

impl NormReport {
    pub fn holds(&self) -> bool {
        self.cleared_has_integer_coords && self.cleared_norm_at_least_one && self.implied_bound_holds
    }
}

pub fn norm_lower_bound(rho: &NFElement, c: &Integer, exponent: usize) -> Result<NormReport> {
    let h = rho.field().degree();
    let factor = Integer::from(rug::ops::Pow::pow(&*c, exponent as u32));
    let cleared = rho.scale_int(&factor);
    let has_int = cleared.has_integer_coords();
    if !has_int {
        return Err(Error::NotIntegral(format!("{c}^{exponent}·rho")));
    }
    let cn = cleared.norm();
    let nr = rho.norm();
    let one = Rational::from(1);
    let implied = Rational::from((Integer::from(1), Integer::from(rug::ops::Pow::pow(&*c, (h * exponent) as u32))));
    let abs_nr = Rational::from(nr.abs_ref());
    let prec = 128;
    let log10 = |x: &Rational| -> f64 {
        if *x == 0 {
            f64::NEG_INFINITY
        } else {
            let l = Interval::from_rational(prec, x).ln().unwrap();
            crate::report::ln_to_log10_upper(&l)
        }
    };
    Ok(NormReport {
        exponent,
        cleared_has_integer_coords: has_int,
        cleared_norm: cn.to_string(),
        norm_rho: nr.to_string(),
        cleared_norm_at_least_one: Rational::from(cn.abs_ref()) >= one,
        implied_bound_holds: abs_nr >= implied,
        implied_lower_log10: log10(&implied),
        norm_log10: log10(&abs_nr),
    })
}

/// `c_den^{r+2mq}·ρ` is integral and `|N(ρ)| ≥ c_den^{−h(r+2mq)}`.
pub fn norm_lower_bound_check(inst: &GSInstance, params: &AuxParams, witness: &RhoWitness) -> Result<NormReport> {
    norm_lower_bound(&witness.rho, inst.c_den(), witness.r + 2 * params.m * params.q)
}

/// `house ρ ≤ t c₄ⁿ n^{(n−1)/2} (c₆q)^r c₇^q ≤ c₈^r r^{r+3/2}`.
#[derive(Clone, Debug, Serialize)]
pub struct HouseRhoReport {
    pub house_rho_log10: f64,
    pub house_le_middle: Comparison,
    /// The middle expression with `n^{(n+1)/2}`, matching the η bound.
    pub house_le_middle_lifted: Comparison,
    pub middle_le_right: Comparison,
}

impl HouseRhoReport {
    pub fn flags(&self) -> Flag {
        self.house_le_middle.holds.and(self.middle_le_right.holds)
    }
}

pub fn house_rho_upper_check(params: &AuxParams, witness: &RhoWitness, consts: &ConstantsTable) -> Result<HouseRhoReport> {
    let prec = consts.precision();
    let house = witness.rho.house().value;
    let lhs = ln_pos(&house)?;
    let (t, n, q, r) = (params.t as u64, params.n as i64, params.q as i64, witness.r as u64);
    let int = |x: i64| Interval::from_int(prec, x);
    let half = |num: i64| Interval::from_rational(prec, &Rational::from((num, 2)));
    let base = ln_u(prec, t)
        .add(&consts.ln("c4").mul(&int(n)))
        .add(&consts.ln("c6").add(&ln_u(prec, q as u64)).mul(&int(r as i64)))
        .add(&consts.ln("c7").mul(&int(q)));
    let lnn = ln_u(prec, n as u64);
    let middle = base.add(&lnn.mul(&half(n - 1)));
    let middle_lifted = base.add(&lnn.mul(&half(n + 1)));
    let right = consts
        .ln("c8")
        .mul(&int(r as i64))
        .add(&crate::report::ln_power_of(prec, r, &Interval::from_rational(prec, &Rational::from((2 * r as i64 + 3, 2)))));
    Ok(HouseRhoReport {
        house_rho_log10: house.log10_upper(),
        house_le_middle: Comparison::of_logs(&lhs, &middle),
        house_le_middle_lifted: Comparison::of_logs(&lhs, &middle_lifted),
        middle_le_right: Comparison::of_logs(&middle, &right),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::compute_constants;
    use crate::exact::QPoly;
    use crate::numfield::{make_field, parse_element};

    fn sqrt2() -> Arc<NumberField> {
        make_field(&QPoly::from_ints(&[-2, 0, 1]), 128).unwrap()
    }

    fn inst(a: &str, b: &str, g: &str, mode: Mode) -> GSInstance {
        let k = sqrt2();
        let p = |s| parse_element(&k, s).unwrap();
        GSInstance::new(1, p(a), p(b), p(g), mode).unwrap()
    }

    #[test]
    fn params() {
        let p = derive_params(2, 12, ParamMode::Gelfond).unwrap();
        assert_eq!((p.m, p.n, p.t), (6, 12, 144));
        assert_eq!(derive_params(2, 5, ParamMode::Gelfond), Err(Error::Divisibility { two_m: 12, q_squared: 25 }));
        assert_eq!(derive_params(1, 4, ParamMode::Gelfond), Err(Error::DegreeTooSmall(1)));
        let s = derive_params(2, 4, ParamMode::Synthetic { m: 2, n: 2 }).unwrap();
        assert_eq!((s.t, s.rows(), s.clearing_exponent()), (16, 4, 17));
        assert!(derive_params(2, 2, ParamMode::Synthetic { m: 2, n: 0 }).is_err());
        for r in 0..p.rows() {
            let (k, l) = p.row_pair(r);
            assert_eq!(p.row_index(k, l), r);
        }
        for c in 0..p.t {
            let (a, b) = p.col_pair(c);
            assert_eq!(p.col_index(a, b), c);
        }
    }

    #[test]
    fn instance_validation() {
        let k = sqrt2();
        let p = |s| parse_element(&k, s).unwrap();
        assert!(GSInstance::new(1, p("1"), p("x"), p("2"), Mode::Gelfond).is_err());
        assert!(GSInstance::new(1, p("x"), p("1/2"), p("2"), Mode::Gelfond).is_err());
        assert!(GSInstance::new(5, p("x"), p("x"), p("2"), Mode::Gelfond).is_err());
        let i = inst("x", "x", "3/2", Mode::Gelfond);
        assert_eq!(*i.c_den(), 2);
    }

    #[test]
    fn coefficients() {
        let i = inst("x", "x", "3/2", Mode::Gelfond);
        assert_eq!(system_coefficient(&i, 1, 1, 1, 1), parse_element(i.field(), "3 + 3/2*x").unwrap());
        assert_eq!(system_coefficient(&i, 0, 2, 1, 1), parse_element(i.field(), "9/2").unwrap());
    }

    #[test]
    fn injectivity() {
        let g = inst("x", "x", "3/2", Mode::Gelfond);
        assert!(check_injectivity(&g, &derive_params(2, 12, ParamMode::Gelfond).unwrap()));
        let s = inst("2", "1/2", "x", Mode::Synthetic);
        assert!(check_injectivity(&s, &derive_params(2, 2, ParamMode::Synthetic { m: 1, n: 1 }).unwrap()));
        let p4 = derive_params(2, 4, ParamMode::Synthetic { m: 2, n: 2 }).unwrap();
        assert!(!check_injectivity(&s, &p4));
        assert!(exponent_collisions(&s, &p4).contains(&((1, 4), (2, 2))));
    }

    #[test]
    fn small_synthetic_pipeline() {
        let s = inst("2", "1/2", "x", Mode::Synthetic);
        let p = derive_params(2, 2, ParamMode::Synthetic { m: 2, n: 1 }).unwrap();
        let c = compute_constants(&s, &p).unwrap();
        let (mat, _) = build_cleared_matrix(&s, &p, &c).unwrap();
        let eta = solve_coefficients(&s, &p, &mat, &c).unwrap();
        assert!(eta.vanishing_verified);
        assert!(eta.eta.iter().any(|e| !e.is_zero()));
        let w = minimal_nonvanishing_order(&s, &p, &eta.eta).unwrap();
        assert!(w.r >= p.n);
        assert!(!w.rho.is_zero());
        assert!(norm_lower_bound_check(&s, &p, &w).unwrap().holds());
    }

    #[test]
    fn norm_reports() {
        let k = sqrt2();
        let r = norm_lower_bound(&NFElement::theta(&k), &Integer::from(1), 3).unwrap();
        assert!(r.holds());
        assert_eq!(r.cleared_norm, "-2");
        let r = norm_lower_bound(&parse_element(&k, "3 + x").unwrap(), &Integer::from(1), 0).unwrap();
        assert_eq!(r.cleared_norm, "7");
        let r = norm_lower_bound(&parse_element(&k, "x/3").unwrap(), &Integer::from(3), 1).unwrap();
        assert_eq!(r.norm_rho, "-2/9");
        assert!(r.holds());
        assert!(norm_lower_bound(&parse_element(&k, "x/3").unwrap(), &Integer::from(2), 1).is_err());
    }
}
