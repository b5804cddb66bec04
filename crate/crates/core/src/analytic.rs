//! Complex-analytic side: the exponential sum `R`, the quotient `S`, and
//! certified contour integrals over the circle `|z| = m(1 + r/q)`.
//!
//! Quadrature is the trapezoid rule on `K` equispaced nodes. For `G`
//! holomorphic on an annulus `ρ_in < |z| < ρ_out` around the circle `|z| = ρ`,
//! the rule returns the constant Laurent coefficient up to
//! `M_out·x/(1−x) + M_in·y/(1−y)`, `x = (ρ/ρ_out)^K`, `y = (ρ_in/ρ)^K`, with
//! `M` bounding `|G|` on the outer and inner circles. That bound is added to
//! the ball sum, so every returned enclosure is rigorous.

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::auxfun::{AuxParams, GSInstance, Mode, RhoWitness};
use crate::ball::{CBall, Interval};
use crate::constants::ConstantsTable;
use crate::error::{Error, Result};
use crate::numfield::NFElement;
use crate::report::{ln_power_of, ln_u, Comparison, Flag};

/// Largest node count tried before giving up on a target width.
pub const MAX_NODES: usize = 1 << 16;
const MIN_NODES: usize = 16;
/// Precision of the truncation-bound arithmetic; only magnitudes matter there.
const BOUND_PREC: u32 = 64;

/// A function that can be evaluated on balls and bounded on circles.
pub trait ContourFn {
    fn eval(&self, z: &CBall) -> Result<CBall>;
    /// Upper bound of `|f|` on the circle `|z| = rho`, valid for `rho` above
    /// [`ContourFn::singular_radius`].
    fn abs_bound(&self, rho: &Float) -> Result<Float>;
    /// All singularities lie in `|z| ≤` this radius; `None` for entire functions.
    fn singular_radius(&self) -> Option<Float> {
        None
    }
}

pub struct Const(pub CBall);

impl ContourFn for Const {
    fn eval(&self, _z: &CBall) -> Result<CBall> {
        Ok(self.0.clone())
    }

    fn abs_bound(&self, _rho: &Float) -> Result<Float> {
        Ok(self.0.abs_upper())
    }
}

pub struct Identity;

impl ContourFn for Identity {
    fn eval(&self, z: &CBall) -> Result<CBall> {
        Ok(z.clone())
    }

    fn abs_bound(&self, rho: &Float) -> Result<Float> {
        Ok(rho.clone())
    }
}

pub struct Exp;

impl ContourFn for Exp {
    fn eval(&self, z: &CBall) -> Result<CBall> {
        Ok(z.exp())
    }

    fn abs_bound(&self, rho: &Float) -> Result<Float> {
        Ok(Interval::point(rho.clone()).exp().hi().clone())
    }
}

/// The circle `|z| = radius` with the arc count used for arc-hull maxima.
#[derive(Clone, Debug)]
pub struct Contour {
    pub radius: Rational,
    pub arcs: usize,
}

impl Contour {
    /// `|z| = m(1 + r/q)`; encloses every point of `1..=m` when `r ≥ 1`.
    pub fn for_order(m: usize, r: usize, q: usize) -> Result<Contour> {
        if q == 0 {
            return Err(Error::ParamError("q must be positive".into()));
        }
        let radius = Rational::from(m as u64) * (Rational::from(1) + Rational::from((r as u64, q as u64)));
        Ok(Contour { radius, arcs: 256 })
    }

    pub fn radius_interval(&self, prec: u32) -> Interval {
        Interval::from_rational(prec, &self.radius)
    }

    /// Ball enclosing the `j`-th of `arcs` equal arcs.
    pub fn arc_ball(&self, j: usize, prec: u32) -> CBall {
        let n = self.arcs as i64;
        let pi = Interval::pi(prec);
        let theta = pi.mul(&Interval::from_rational(prec, &Rational::from((2 * j as i64 + 1, n))));
        let rc = self.radius_interval(prec);
        let mid = CBall::cis(&theta).mul_real(&rc);
        // Every point of the arc is within half its length of the midpoint.
        let half_len = rc.mul(&pi).div(&Interval::from_int(prec, n)).expect("nonzero");
        mid.inflate(half_len.hi())
    }
}

/// `R(z) = Σ σ(η_t) e^{ρ_t z}` with `ρ_t = (a + b·σβ)·Log σα`.
#[derive(Clone, Debug)]
pub struct AnalyticR {
    prec: u32,
    log_alpha: CBall,
    sigma_beta: CBall,
    terms: Vec<Term>,
    max_a: usize,
    max_b: usize,
}

#[derive(Clone, Debug)]
struct Term {
    a: usize,
    b: usize,
    eta: CBall,
    rho: CBall,
}

impl AnalyticR {
    /// Embeds `η` through `σ` at `prec` bits, dropping zero coefficients.
    pub fn new(inst: &GSInstance, params: &AuxParams, eta: &[NFElement], prec: u32) -> Result<AnalyticR> {
        if eta.len() != params.t {
            return Err(Error::ShapeError(format!("{} coefficients for t = {}", eta.len(), params.t)));
        }
        let hp = inst.with_precision(prec)?;
        let s = hp.sigma_index();
        let log_alpha = hp.alpha().log_embed(s)?;
        let sigma_beta = hp.beta().embed(s);
        let mut terms = Vec::new();
        for (c, e) in eta.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let (a, b) = params.col_pair(c);
            terms.push((a, b, e.in_field(hp.field()).embed(s)));
        }
        Ok(AnalyticR::from_terms(prec, log_alpha, sigma_beta, terms))
    }

    /// Direct construction from `(a, b, σ(η))` triples.
    pub fn from_terms(prec: u32, log_alpha: CBall, sigma_beta: CBall, terms: Vec<(usize, usize, CBall)>) -> AnalyticR {
        let mut max_a = 0;
        let mut max_b = 0;
        let terms = terms
            .into_iter()
            .map(|(a, b, eta)| {
                max_a = max_a.max(a);
                max_b = max_b.max(b);
                let base = CBall::from_int(prec, a as i64).add(&sigma_beta.mul_int(b as i64));
                Term { a, b, eta, rho: base.mul(&log_alpha) }
            })
            .collect();
        AnalyticR { prec, log_alpha, sigma_beta, terms, max_a, max_b }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn log_alpha(&self) -> &CBall {
        &self.log_alpha
    }

    /// `R^{(k)}(z) = Σ σ(η_t) ρ_t^k e^{ρ_t z}`, via `e^{ρ_t z} = u^a v^b` with
    /// `u = e^{z·Log α}` and `v = e^{z·β·Log α}`.
    pub fn derivative(&self, k: usize, z: &CBall) -> CBall {
        let lz = self.log_alpha.mul(z);
        let powers = |base: CBall, top: usize| {
            let mut v = vec![CBall::one(self.prec)];
            for j in 1..=top {
                v.push(v[j - 1].mul(&base));
            }
            v
        };
        let u = powers(lz.exp(), self.max_a);
        let v = powers(self.sigma_beta.mul(&lz).exp(), self.max_b);
        let mut acc = CBall::zero(self.prec);
        for t in &self.terms {
            let mut term = t.eta.mul(&u[t.a]).mul(&v[t.b]);
            if k > 0 {
                term = term.mul(&t.rho.pow(k as u32));
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Upper bound of `|R^{(k)}|` on `|z| = rho`: `Σ |η_t| |ρ_t|^k e^{|ρ_t| rho}`.
    pub fn derivative_bound(&self, k: usize, rho: &Float) -> Float {
        let p = BOUND_PREC;
        let rho_hi = Interval::point(Float::with_val(p, rho));
        let mut acc = Interval::from_int(p, 0);
        for t in &self.terms {
            let r_abs = Interval::point(t.rho.abs_upper());
            let e = Interval::point(t.eta.abs_upper());
            let term = e.mul(&r_abs.pow(k as u32)).mul(&r_abs.mul(&rho_hi).exp());
            acc = acc.add(&term);
        }
        acc.hi().clone()
    }
}

impl ContourFn for AnalyticR {
    fn eval(&self, z: &CBall) -> Result<CBall> {
        Ok(self.derivative(0, z))
    }

    fn abs_bound(&self, rho: &Float) -> Result<Float> {
        Ok(self.derivative_bound(0, rho))
    }
}

/// Enclosure of `R^{(k)}(z)` for the instance at `prec` bits.
pub fn eval_r_derivative(inst: &GSInstance, params: &AuxParams, eta: &[NFElement], k: usize, z: &CBall, prec: u32) -> Result<CBall> {
    Ok(AnalyticR::new(inst, params, eta, prec)?.derivative(k, z))
}

/// `S(z) = r!·R(z)/(z−ℓ₀)^r · ∏_{k≠ℓ₀} ((ℓ₀−k)/(z−k))^r`, valid off `1..=m`.
pub struct SFunction<'a> {
    pub r_fn: &'a AnalyticR,
    pub order: usize,
    pub l0: usize,
    pub m: usize,
}

impl SFunction<'_> {
    fn factorial(&self, prec: u32) -> Interval {
        Interval::from_integer(prec, &Integer::from(Integer::factorial(self.order as u32)))
    }

    /// `|∏_{k≠ℓ₀}(ℓ₀−k)|^r` exactly.
    fn numerator_product(&self) -> Integer {
        let mut p = Integer::from(1);
        for k in 1..=self.m {
            if k != self.l0 {
                p *= (self.l0 as i64 - k as i64).abs();
            }
        }
        Integer::from(rug::ops::Pow::pow(&p, self.order as u32))
    }

    /// Upper bound of `|(z−ℓ₀)^{−r}∏_{k≠ℓ₀}((ℓ₀−k)/(z−k))^r|` over the ball,
    /// from lower bounds of each `|z − k|`. Unlike the complex product this
    /// does not compound the ball radius across the `mr` factors.
    pub fn rational_factor_abs_upper(&self, z: &CBall) -> Result<Float> {
        if self.order == 0 {
            return Ok(Float::with_val(BOUND_PREC, 1));
        }
        let p = BOUND_PREC;
        let mut den = Interval::from_int(p, 1);
        for k in 1..=self.m {
            let d = z.sub(&CBall::from_int(z.prec(), k as i64)).abs_lower();
            if d.is_zero() {
                return Err(Error::PoleProximity { pole: k as i64 });
            }
            den = den.mul(&Interval::point(Float::with_val(p, &d)));
        }
        let num = Interval::from_integer(p, &self.numerator_product());
        Ok(num.div(&den.pow(self.order as u32))?.hi().clone())
    }

    /// `(z−ℓ₀)^{−r}∏_{k≠ℓ₀}((ℓ₀−k)/(z−k))^r`.
    pub fn rational_factor(&self, z: &CBall) -> Result<CBall> {
        let prec = z.prec().max(self.r_fn.prec);
        if self.order == 0 {
            return Ok(CBall::one(prec));
        }
        for k in 1..=self.m {
            if z.sub(&CBall::from_int(prec, k as i64)).contains_zero() {
                return Err(Error::PoleProximity { pole: k as i64 });
            }
        }
        let e = self.order as u32;
        let mut den = z.sub(&CBall::from_int(prec, self.l0 as i64)).pow(e);
        for k in 1..=self.m {
            if k != self.l0 {
                den = den.mul(&z.sub(&CBall::from_int(prec, k as i64)).pow(e));
            }
        }
        let mut num = CBall::from_real(&Interval::from_integer(prec, &self.numerator_product()));
        // Sign of ∏(ℓ₀−k)^r: negative factors are those with k > ℓ₀.
        if (self.m - self.l0) % 2 == 1 && e % 2 == 1 {
            num = num.neg();
        }
        num.div(&den)
    }
}

impl ContourFn for SFunction<'_> {
    fn eval(&self, z: &CBall) -> Result<CBall> {
        let rat = self.rational_factor(z)?;
        let prec = rat.prec();
        Ok(self.r_fn.derivative(0, z).mul(&rat).mul_real(&self.factorial(prec)))
    }

    fn abs_bound(&self, rho: &Float) -> Result<Float> {
        let p = BOUND_PREC;
        let fr = Interval::point(self.r_fn.derivative_bound(0, rho));
        if self.order == 0 {
            return Ok(fr.hi().clone());
        }
        let rho = Interval::point(Float::with_val(p, rho));
        let e = self.order as u32;
        let mut den = rho.sub(&Interval::from_int(p, self.l0 as i64)).pow(e);
        for k in 1..=self.m {
            if k != self.l0 {
                den = den.mul(&rho.sub(&Interval::from_int(p, k as i64)).pow(e));
            }
        }
        if !den.is_positive() {
            return Err(Error::PoleProximity { pole: self.m as i64 });
        }
        let num = self.factorial(p).mul(&fr).mul(&Interval::from_integer(p, &self.numerator_product()));
        Ok(num.div(&den)?.hi().clone())
    }

    fn singular_radius(&self) -> Option<Float> {
        (self.order > 0).then(|| Float::with_val(BOUND_PREC, self.m as u64))
    }
}

/// Enclosure of `(1/2πi)∮ f(z)/(z − w) dz` with its quadrature data.
#[derive(Clone, Debug)]
pub struct ContourValue {
    pub value: CBall,
    pub nodes: usize,
    /// Upper bound of the trapezoid truncation error, included in `value`.
    pub truncation: Float,
}

impl ContourValue {
    pub fn width(&self) -> f64 {
        self.value.width().to_f64()
    }
}

/// `ln` of a positive upper bound as `f64`; `+∞` when the bound is not finite.
fn ln_f64(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    if !x.is_finite() {
        return f64::INFINITY;
    }
    Float::with_val(BOUND_PREC, x.ln_ref()).to_f64()
}

/// `M·x/(1−x)` with `x = ratio^K`, rounded up; `∞` unless `x ≤ 1/2`.
fn geometric_tail(m: &Float, ratio: &Interval, k: usize) -> Float {
    let x = ratio.pow(k as u32);
    if *x.hi() > 0.5 {
        return Float::with_val(BOUND_PREC, f64::INFINITY);
    }
    let one = Interval::from_int(BOUND_PREC, 1);
    let tail = Interval::point(m.clone()).mul(&x).div(&one.sub(&x)).expect("x ≤ 1/2");
    tail.hi().clone()
}

/// Bound on `|z·f(z)/(z − w)|` over `|z| = rho`.
fn g_bound<F: ContourFn + ?Sized>(f: &F, rho: &Float, w_abs: &Float) -> Result<Float> {
    let p = BOUND_PREC;
    let fb = Interval::point(f.abs_bound(rho)?);
    let r = Interval::point(Float::with_val(p, rho));
    let gap = r.sub(&Interval::point(Float::with_val(p, w_abs)));
    if !gap.is_positive() {
        return Err(Error::ParamError("centre is not inside the annulus".into()));
    }
    Ok(r.mul(&fb).div(&gap)?.hi().clone())
}

/// Truncation data for one centre: the chosen annulus and its bounds.
struct QuadraturePlan {
    nodes: usize,
    m_in: Float,
    y: Interval,
    m_out: Float,
    x: Interval,
}

impl QuadraturePlan {
    fn truncation(&self, k: usize) -> Float {
        Float::with_val(BOUND_PREC, geometric_tail(&self.m_out, &self.x, k) + geometric_tail(&self.m_in, &self.y, k))
    }
}

/// Picks the annulus minimising the node count for centre `w`.
fn plan_quadrature<F: ContourFn + ?Sized>(f: &F, w: &CBall, contour: &Contour, budget: &Float, prec: u32) -> Result<QuadraturePlan> {
    let rc_iv = contour.radius_interval(prec);
    let rc = Float::with_val(BOUND_PREC, contour.radius.to_f64());
    let w_abs = w.abs_upper();
    let mut inner = w_abs.clone();
    if let Some(s) = f.singular_radius() {
        if s > inner {
            inner = s;
        }
    }
    let rc_lo = rc_iv.lo().clone();
    if inner >= rc_lo {
        return Err(Error::ParamError("contour does not enclose the centre and singularities".into()));
    }
    let mut best: Option<QuadraturePlan> = None;
    let rc_up = Interval::point(Float::with_val(BOUND_PREC, rc_iv.hi()));
    let rc_dn = Interval::point(Float::with_val(BOUND_PREC, &rc_lo));
    for fin in [0.25f64, 0.5, 0.75] {
        let rho_in = Float::with_val(BOUND_PREC, &inner + Float::with_val(BOUND_PREC, &rc_lo - &inner) * fin);
        if rho_in <= inner {
            continue;
        }
        let m_in = g_bound(f, &rho_in, &w_abs)?;
        let y = Interval::point(rho_in.clone()).div(&rc_dn)?;
        for fout in [1.25f64, 1.5, 2.0, 3.0, 4.0] {
            let rho_out = Float::with_val(BOUND_PREC, &rc * fout);
            let m_out = g_bound(f, &rho_out, &w_abs)?;
            let x = rc_up.div(&Interval::point(rho_out.clone()))?;
            // K ≥ ln(4M/budget)/ln(1/ratio) on each side.
            let need = |m: &Float, ratio: &Interval| {
                let l = ln_f64(m) + 4f64.ln() - ln_f64(budget);
                let d = -ln_f64(ratio.hi());
                (l / d).max(1.0)
            };
            let est = need(&m_out, &x).max(need(&m_in, &y));
            if !est.is_finite() || est > MAX_NODES as f64 {
                continue;
            }
            let mut plan = QuadraturePlan {
                nodes: (est.ceil() as usize).next_power_of_two().max(MIN_NODES),
                m_in: m_in.clone(),
                y: y.clone(),
                m_out,
                x,
            };
            while plan.truncation(plan.nodes) > *budget && plan.nodes < MAX_NODES {
                plan.nodes *= 2;
            }
            if plan.truncation(plan.nodes) <= *budget && best.as_ref().map_or(true, |b| plan.nodes < b.nodes) {
                best = Some(plan);
            }
        }
    }
    best.ok_or(Error::WidthNotReached { arcs: MAX_NODES, width: f64::INFINITY })
}

/// Certified `(1/2πi)∮_{|z|=ρ} f(z)/(z − w) dz`.
///
/// The node count is the smallest power of two whose truncation bound is at
/// most half of `target_width`; the rest of the width budget is rounding.
/// The value is returned even when rounding pushes the width past the
/// target, so callers can decide whether to raise the precision.
pub fn contour_integral<F: ContourFn + ?Sized>(
    f: &F,
    w: &CBall,
    contour: &Contour,
    target_width: f64,
    prec: u32,
) -> Result<ContourValue> {
    Ok(contour_integrals(f, std::slice::from_ref(w), contour, target_width, prec)?.remove(0))
}

/// [`contour_integral`] for several centres sharing one set of evaluations
/// of `f` on the nodes.
pub fn contour_integrals<F: ContourFn + ?Sized>(
    f: &F,
    ws: &[CBall],
    contour: &Contour,
    target_width: f64,
    prec: u32,
) -> Result<Vec<ContourValue>> {
    let budget = Float::with_val(BOUND_PREC, target_width / 2.0);
    let plans = ws.iter().map(|w| plan_quadrature(f, w, contour, &budget, prec)).collect::<Result<Vec<_>>>()?;
    let k = plans.iter().map(|p| p.nodes).max().unwrap_or(MIN_NODES);
    let rc_iv = contour.radius_interval(prec);
    let pi = Interval::pi(prec);
    let mut sums = vec![CBall::zero(prec); ws.len()];
    for j in 0..k {
        let theta = pi.mul(&Interval::from_rational(prec, &Rational::from((2 * j as i64, k as i64))));
        let z = CBall::cis(&theta).mul_real(&rc_iv);
        let zf = f.eval(&z)?.mul(&z);
        for (sum, w) in sums.iter_mut().zip(ws) {
            *sum = sum.add(&zf.div(&z.sub(w))?);
        }
    }
    let inv_k = Interval::from_rational(prec, &Rational::from((1, k as i64)));
    Ok(sums
        .into_iter()
        .zip(&plans)
        .map(|(sum, plan)| {
            let truncation = plan.truncation(k);
            ContourValue { value: sum.mul_real(&inv_k).inflate(&truncation), nodes: k, truncation }
        })
        .collect())
}

/// Comparison of `σ(ρ)` against `(Log α)^{−r}·(1/2πi)∮ S(z)/(z−ℓ₀) dz`.
#[derive(Clone, Debug, Serialize)]
pub struct Eq7Report {
    pub r: usize,
    pub l0: usize,
    pub precision_bits: u32,
    pub contour_radius: String,
    pub nodes: usize,
    pub sigma_rho: String,
    pub integral_value: String,
    pub sigma_rho_width: f64,
    pub integral_width: f64,
    pub combined_width: f64,
    pub overlap: bool,
}

impl Eq7Report {
    pub fn holds(&self, max_width: f64) -> bool {
        self.overlap && self.combined_width < max_width
    }
}

/// Validates the integral representation of `ρ` on a synthetic instance,
/// where `σγ′ = (σα′)^{σβ′}` holds exactly.
pub fn validate_eq7_synthetic(
    inst: &GSInstance,
    params: &AuxParams,
    eta: &[NFElement],
    witness: &RhoWitness,
    prec: u32,
) -> Result<Eq7Report> {
    if inst.mode() != Mode::Synthetic {
        return Err(Error::ParamError("the integral identity is only checked on synthetic instances".into()));
    }
    if params.n == 0 {
        return Err(Error::ParamError("n must be positive".into()));
    }
    let rf = AnalyticR::new(inst, params, eta, prec)?;
    let hp = inst.with_precision(prec)?;
    let sigma_rho = witness.rho.in_field(hp.field()).embed(hp.sigma_index());
    let s = SFunction { r_fn: &rf, order: witness.r, l0: witness.l0, m: params.m };
    let contour = Contour::for_order(params.m, witness.r, params.q)?;
    // (Log α)^{−r} scales the integral; budget its width accordingly.
    let inv_log = rf.log_alpha().inv()?.pow(witness.r as u32);
    let scale = inv_log.abs_upper().to_f64().max(1e-300);
    let target = 1e-12 / scale.max(1.0);
    let l0 = CBall::from_int(prec, witness.l0 as i64);
    let cv = contour_integral(&s, &l0, &contour, target, prec)?;
    let value = cv.value.mul(&inv_log);
    let sw = sigma_rho.width().to_f64();
    let iw = value.width().to_f64();
    Ok(Eq7Report {
        r: witness.r,
        l0: witness.l0,
        precision_bits: prec,
        contour_radius: contour.radius.to_string(),
        nodes: cv.nodes,
        sigma_rho: sigma_rho.to_string(),
        integral_value: value.to_string(),
        sigma_rho_width: sw,
        integral_width: iw,
        combined_width: sw + iw,
        overlap: sigma_rho.overlaps(&value),
    })
}

/// One Cauchy self-test point: `(1/2πi)∮ R(z)/(z−w) dz` against `R(w)`.
#[derive(Clone, Debug, Serialize)]
pub struct CauchyCheck {
    pub w: (f64, f64),
    pub direct: String,
    pub integral: String,
    pub direct_width: f64,
    pub integral_width: f64,
    pub nodes: usize,
    pub precision_bits: u32,
    pub overlap: bool,
}

/// Cauchy's formula for the entire `R` at interior points `ws`.
pub fn cauchy_self_test(rf: &AnalyticR, contour: &Contour, ws: &[CBall], target_width: f64) -> Result<Vec<CauchyCheck>> {
    let prec = rf.precision();
    let values = contour_integrals(rf, ws, contour, target_width, prec)?;
    Ok(ws
        .iter()
        .zip(values)
        .map(|(w, cv)| {
            let direct = rf.derivative(0, w);
            CauchyCheck {
                w: w.to_f64(),
                direct: direct.to_string(),
                integral: cv.value.to_string(),
                direct_width: direct.width().to_f64(),
                integral_width: cv.width(),
                nodes: cv.nodes,
                precision_bits: prec,
                overlap: direct.overlaps(&cv.value),
            }
        })
        .collect())
}

/// Bits needed so rounding on the contour stays below `target_width`.
pub fn precision_for(rf: &AnalyticR, contour: &Contour, target_width: f64) -> u32 {
    let rho = Float::with_val(BOUND_PREC, contour.radius.to_f64() * 1.01);
    let ln_max = ln_f64(&rf.derivative_bound(0, &rho)).max(0.0);
    let bits = (ln_max - target_width.ln()) / std::f64::consts::LN_2;
    (bits.ceil() as u32 + 96).max(128)
}

/// Runs the self-test, raising the precision until every width meets the target.
pub fn cauchy_self_test_auto(
    inst: &GSInstance,
    params: &AuxParams,
    eta: &[NFElement],
    contour: &Contour,
    ws: &[CBall],
    target_width: f64,
) -> Result<Vec<CauchyCheck>> {
    let probe = AnalyticR::new(inst, params, eta, 128)?;
    let mut prec = precision_for(&probe, contour, target_width);
    for _ in 0..4 {
        let rf = AnalyticR::new(inst, params, eta, prec)?;
        let ws_hp: Vec<CBall> = ws.iter().map(|w| w.set_prec(prec)).collect();
        let checks = cauchy_self_test(&rf, contour, &ws_hp, target_width)?;
        if checks.iter().all(|c| c.integral_width < target_width && c.direct_width < target_width) {
            return Ok(checks);
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted(format!("Cauchy self-test widths above {target_width:e}")))
}

/// Step-by-step analytic bounds on the contour, in log space.
#[derive(Clone, Debug, Serialize)]
pub struct BoundChainReport {
    pub r: usize,
    pub l0: usize,
    pub contour_radius: String,
    pub arcs: usize,
    pub max_abs_r_log10: f64,
    /// `max|R| ≤ t·c₄ⁿ n^{(n+1)/2} c₉^{r+q}`.
    pub r_le_middle: Comparison,
    /// `t·c₄ⁿ n^{(n+1)/2} c₉^{r+q} ≤ c₁₀^r r^{(r+3)/2}`.
    pub middle_le_c10: Comparison,
    pub r_le_c10: Comparison,
    /// Exact `ρ_C − m` against `mr/q`; both rational.
    pub separation_exact: String,
    pub separation_target: String,
    pub separation_holds: bool,
    /// Certified lower bound of `min |z − k|` over the arc enclosures.
    pub separation_arcs_lower: f64,
    /// `max|(z−ℓ₀)^{−r}∏((ℓ₀−k)/(z−k))^r| ≤ c₁₁^r (q/r)^{mr}`.
    pub product_bound: Option<Comparison>,
    pub max_abs_s_log10: Option<f64>,
    /// `max|S| ≤ c₁₂^r r^{(r(3−m)+3)/2}`.
    pub s_le_c12: Option<Comparison>,
    /// The same with the exponent `(r(3−r)+3)/2`.
    pub s_le_c12_alt: Option<Comparison>,
    /// `|Log α|^{−r}·ρ_C·max|S|`, the contour bound on `|ρ|`.
    pub contour_rho_bound_log10: Option<f64>,
    pub sigma_rho_log10: f64,
    /// `|σρ| ≤` the contour bound; meaningful when the integral identity holds.
    pub sigma_rho_le_contour: Option<Comparison>,
    /// Contour bound `≤ c₁₃^r r^{(r(3−m)+3)/2}`.
    pub contour_le_c13: Option<Comparison>,
    pub contour_le_c13_alt: Option<Comparison>,
}

impl BoundChainReport {
    /// Conjunction of the primary comparisons.
    pub fn flags(&self) -> Flag {
        let mut f = self.r_le_middle.holds.and(self.middle_le_c10.holds).and(Flag::from_bool(self.separation_holds));
        for c in [&self.product_bound, &self.s_le_c12, &self.contour_le_c13].into_iter().flatten() {
            f = f.and(c.holds);
        }
        f
    }
}

pub fn bound_chain_report(
    inst: &GSInstance,
    params: &AuxParams,
    eta: &[NFElement],
    witness: &RhoWitness,
    consts: &ConstantsTable,
    prec: u32,
) -> Result<BoundChainReport> {
    let rf = AnalyticR::new(inst, params, eta, prec)?;
    let (m, n, q, t, r) = (params.m, params.n, params.q, params.t, witness.r);
    let contour = Contour::for_order(m, r, q)?;
    let cp = consts.precision();
    let int = |x: i64| Interval::from_int(cp, x);
    let half = |num: i64| Interval::from_rational(cp, &Rational::from((num, 2)));
    let ln_r_pow = |e: &Interval| ln_power_of(cp, r as u64, e);

    let arcs: Vec<CBall> = (0..contour.arcs).map(|j| contour.arc_ball(j, prec)).collect();
    let r_arcs: Vec<Float> = arcs.iter().map(|z| rf.derivative(0, z).abs_upper()).collect();
    let r_max = r_arcs.iter().fold(Float::with_val(BOUND_PREC, 0), |a, b| if *b > a { b.clone() } else { a });
    let ln_rmax = ln_of_upper(cp, &r_max);
    let middle = ln_u(cp, t as u64)
        .add(&consts.ln("c4").mul(&int(n as i64)))
        .add(&ln_u(cp, n as u64).mul(&half(n as i64 + 1)))
        .add(&consts.ln("c9").mul(&int((r + q) as i64)));
    let c10_side = consts.ln("c10").mul(&int(r as i64)).add(&ln_r_pow(&half(r as i64 + 3)));

    // |z − k| ≥ |z| − k ≥ ρ_C − m on the circle, and ρ_C − m = mr/q exactly.
    let sep_exact = Rational::from(&contour.radius - Rational::from(m as u64));
    let sep_target = Rational::from((m as u64 * r as u64, q as u64));
    let mut sep_arcs = Float::with_val(BOUND_PREC, f64::INFINITY);
    for z in &arcs {
        for k in 1..=m {
            let d = z.sub(&CBall::from_int(prec, k as i64)).abs_lower();
            if d < sep_arcs {
                sep_arcs = Float::with_val(BOUND_PREC, &d);
            }
        }
    }

    let hp = inst.with_precision(prec)?;
    let sigma_rho = witness.rho.in_field(hp.field()).embed(hp.sigma_index());
    let ln_sigma_rho = sigma_rho.abs().ln().ok();
    let sigma_rho_log10 = sigma_rho.abs().log10_upper();

    let mut report = BoundChainReport {
        r,
        l0: witness.l0,
        contour_radius: contour.radius.to_string(),
        arcs: contour.arcs,
        max_abs_r_log10: crate::ball::log10_up(&r_max),
        r_le_middle: Comparison::of_logs(&ln_rmax, &middle),
        middle_le_c10: Comparison::of_logs(&middle, &c10_side),
        r_le_c10: Comparison::of_logs(&ln_rmax, &c10_side),
        separation_exact: sep_exact.to_string(),
        separation_target: sep_target.to_string(),
        separation_holds: sep_exact >= sep_target,
        separation_arcs_lower: sep_arcs.to_f64(),
        product_bound: None,
        max_abs_s_log10: None,
        s_le_c12: None,
        s_le_c12_alt: None,
        contour_rho_bound_log10: None,
        sigma_rho_log10,
        sigma_rho_le_contour: None,
        contour_le_c13: None,
        contour_le_c13_alt: None,
    };
    if r == 0 {
        return Ok(report);
    }

    let s = SFunction { r_fn: &rf, order: r, l0: witness.l0, m };
    // Sub-arcs keep the per-factor relative radius near 1/(8mr).
    let sub = (m * r).div_ceil(8).next_power_of_two();
    let fine = Contour { radius: contour.radius.clone(), arcs: contour.arcs * sub };
    let fact = Interval::from_integer(BOUND_PREC, &Integer::from(Integer::factorial(r as u32)));
    let mut prod_max = Float::with_val(BOUND_PREC, 0);
    let mut s_max = Float::with_val(BOUND_PREC, 0);
    for (j, r_up) in r_arcs.iter().enumerate() {
        let mut local = Float::with_val(BOUND_PREC, 0);
        for i in 0..sub {
            let p = s.rational_factor_abs_upper(&fine.arc_ball(j * sub + i, prec))?;
            if p > local {
                local = p;
            }
        }
        let v = fact.mul(&Interval::point(Float::with_val(BOUND_PREC, r_up))).mul(&Interval::point(local.clone()));
        if *v.hi() > s_max {
            s_max = v.hi().clone();
        }
        if local > prod_max {
            prod_max = local;
        }
    }
    let ln_q_over_r = ln_u(cp, q as u64).sub(&ln_u(cp, r as u64));
    let prod_side = consts.ln("c11").mul(&int(r as i64)).add(&ln_q_over_r.mul(&int((m * r) as i64)));
    report.product_bound = Some(Comparison::of_logs(&ln_of_upper(cp, &prod_max), &prod_side));

    let ln_smax = ln_of_upper(cp, &s_max);
    let ri = r as i64;
    let e_m = half(ri * (3 - m as i64) + 3);
    let e_r = half(ri * (3 - ri) + 3);
    let c12 = consts.ln("c12").mul(&int(ri));
    report.max_abs_s_log10 = Some(crate::ball::log10_up(&s_max));
    report.s_le_c12 = Some(Comparison::of_logs(&ln_smax, &c12.add(&ln_r_pow(&e_m))));
    report.s_le_c12_alt = Some(Comparison::of_logs(&ln_smax, &c12.add(&ln_r_pow(&e_r))));

    // (1/2π)|Log α|^{−r}∮|S||dz| ≤ |Log α|^{−r}·ρ_C·max|S|.
    let ln_abs_log = rf.log_alpha().abs().ln()?;
    let ln_abs_log = Interval::new(Float::with_val(cp, ln_abs_log.lo()), Float::with_val(cp, ln_abs_log.hi()));
    let contour_bound = ln_smax
        .sub(&ln_abs_log.mul(&int(ri)))
        .add(&crate::report::ln_rational(cp, &contour.radius)?);
    let c13 = consts.ln("c13").mul(&int(ri));
    report.contour_rho_bound_log10 = Some(crate::report::ln_to_log10_upper(&contour_bound));
    report.sigma_rho_le_contour = ln_sigma_rho.map(|l| {
        let l = Interval::new(Float::with_val(cp, l.lo()), Float::with_val(cp, l.hi()));
        Comparison::of_logs(&l, &contour_bound)
    });
    report.contour_le_c13 = Some(Comparison::of_logs(&contour_bound, &c13.add(&ln_r_pow(&e_m))));
    report.contour_le_c13_alt = Some(Comparison::of_logs(&contour_bound, &c13.add(&ln_r_pow(&e_r))));
    Ok(report)
}

/// Enclosure `[ln x, ln x]` widened upward for a positive upper bound `x`.
fn ln_of_upper(prec: u32, x: &Float) -> Interval {
    if x.is_zero() {
        // −∞ is represented by a very negative finite value.
        return Interval::from_int(prec, -(1 << 40));
    }
    Interval::point(Float::with_val(prec.max(x.prec()), x)).ln().expect("positive")
}
