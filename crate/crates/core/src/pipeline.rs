//! End-to-end run: parameters, system, Siegel solution, order search,
//! algebraic and analytic bounds, constants and the contradiction threshold.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::analytic::{bound_chain_report, validate_eq7_synthetic, BoundChainReport, Eq7Report};
use crate::auxfun::{
    build_cleared_matrix, check_injectivity, exponent_collisions, house_rho_upper_check, minimal_nonvanishing_order,
    norm_lower_bound_check, solve_coefficients, AuxParams, HouseRhoReport, HouseReport, InstanceSpec, Mode,
    NormReport, SiegelSummary,
};
use crate::constants::{compute_constants, instance_threshold, ThresholdReport};
use crate::error::{Error, Result};
use crate::report::{Comparison, Flag};

/// Default working precision; doubled on demand up to [`MAX_PRECISION`].
pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 1024;

/// Runs `f` at `prec`, doubling on `PrecisionExhausted` up to [`MAX_PRECISION`].
pub fn with_precision_retry<T>(prec: u32, mut f: impl FnMut(u32) -> Result<T>) -> (Result<T>, u32) {
    let mut p = prec;
    loop {
        match f(p) {
            Err(Error::PrecisionExhausted(_)) if p < MAX_PRECISION => p = (p * 2).min(MAX_PRECISION),
            other => return (other, p),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamsJson {
    pub h: usize,
    pub m: usize,
    pub n: usize,
    pub q: usize,
    pub t: usize,
    pub rows: usize,
    pub clearing_exponent: usize,
}

impl From<&AuxParams> for ParamsJson {
    fn from(p: &AuxParams) -> Self {
        ParamsJson { h: p.h, m: p.m, n: p.n, q: p.q, t: p.t, rows: p.rows(), clearing_exponent: p.clearing_exponent() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaStats {
    pub nonzero: usize,
    pub max_house_log10: f64,
    pub vanishing_verified: bool,
    /// `max house η ≤ c₄ⁿ n^{(n+1)/2}`.
    pub house_bound: Comparison,
    pub house_bound_pre_lift: Comparison,
}

#[derive(Clone, Debug, Serialize)]
pub struct Injectivity {
    pub injective: bool,
    pub collisions: Vec<((usize, usize), (usize, usize))>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessJson {
    pub r: usize,
    pub l0: usize,
    pub rho_nonzero: bool,
    /// The literal, omitted beyond 400 characters.
    pub rho: Option<String>,
    pub house_rho_log10: f64,
}

/// One hard assertion; any failure makes the run fail.
#[derive(Clone, Debug, Serialize)]
pub struct HardCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    /// The instance as given plus the effective precision; re-runnable.
    pub echo: Value,
    pub field: Value,
    pub mode: Mode,
    pub params: ParamsJson,
    pub c_den: String,
    pub c_basis: String,
    pub matrix_house: HouseReport,
    pub siegel: SiegelSummary,
    pub eta: EtaStats,
    pub injectivity: Injectivity,
    pub witness: WitnessJson,
    pub norm: NormReport,
    pub house_rho: HouseRhoReport,
    pub house_rho_flags: Flag,
    pub bound_chain: Option<BoundChainReport>,
    pub bound_chain_flags: Flag,
    pub bound_chain_error: Option<String>,
    pub eq7: Option<Eq7Report>,
    pub constants: Value,
    pub threshold: Option<ThresholdReport>,
    pub threshold_error: Option<String>,
    pub hard_checks: Vec<HardCheck>,
    pub precision_bits: u32,
    pub timings_ms: BTreeMap<&'static str, f64>,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.hard_checks.iter().all(|c| c.holds)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.hard_checks.iter().filter(|c| !c.holds).map(|c| c.name).collect()
    }

    /// The report with timing fields cleared, for reproducibility checks.
    pub fn without_timings(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serialisable");
        v.as_object_mut().expect("object").remove("timings_ms");
        v
    }
}

/// Options for [`run_pipeline`].
#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub precision: u32,
    /// Width target for the integral check in synthetic mode.
    pub target_width: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { precision: DEFAULT_PRECISION, target_width: 1e-10 }
    }
}

struct Clock {
    last: Instant,
    timings: BTreeMap<&'static str, f64>,
}

impl Clock {
    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.timings.insert(stage, (now - self.last).as_secs_f64() * 1e3);
        self.last = now;
    }
}

/// Runs every stage on `spec`. Errors are stage failures that leave nothing
/// to report; soft outcomes are recorded as flags instead.
pub fn run_pipeline(spec: &InstanceSpec, opts: &PipelineOptions) -> Result<PipelineReport> {
    let mut clock = Clock { last: Instant::now(), timings: BTreeMap::new() };
    let (loaded, prec) = with_precision_retry(opts.precision, |p| spec.load(Some(p)));
    let (inst, params) = loaded?;
    clock.lap("setup");

    let (consts, prec) = with_precision_retry(prec, |p| compute_constants(&inst.with_precision(p)?, &params));
    let consts = consts?;
    let inst = if prec != inst.field().precision() { inst.with_precision(prec)? } else { inst };
    clock.lap("constants");

    let (matrix, matrix_house) = build_cleared_matrix(&inst, &params, &consts)?;
    clock.lap("system");
    let sol = solve_coefficients(&inst, &params, &matrix, &consts)?;
    clock.lap("siegel");

    let injectivity = Injectivity { injective: check_injectivity(&inst, &params), collisions: exponent_collisions(&inst, &params) };
    let witness = minimal_nonvanishing_order(&inst, &params, &sol.eta)?;
    clock.lap("order");

    let norm = norm_lower_bound_check(&inst, &params, &witness)?;
    let house_rho = house_rho_upper_check(&params, &witness, &consts)?;
    clock.lap("algebraic_bounds");

    let (chain, chain_prec) = with_precision_retry(prec, |p| bound_chain_report(&inst, &params, &sol.eta, &witness, &consts, p));
    let (bound_chain, bound_chain_error) = match chain {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    clock.lap("bound_chain");

    let eq7 = if inst.mode() == Mode::Synthetic {
        let (r, _) = with_precision_retry(prec, |p| validate_eq7_synthetic(&inst, &params, &sol.eta, &witness, p));
        Some(r?)
    } else {
        None
    };
    clock.lap("integral_identity");

    let (threshold, threshold_error) = match instance_threshold(&inst, &params) {
        Ok((_, t)) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    };
    clock.lap("threshold");

    let mut hard_checks = vec![
        HardCheck { name: "exact_vanishing", holds: sol.vanishing_verified },
        HardCheck { name: "rho_nonzero", holds: !witness.rho.is_zero() },
        HardCheck { name: "r_at_least_n", holds: witness.r >= params.n },
        HardCheck { name: "norm_lower_bound", holds: norm.holds() },
    ];
    if let Some(e) = &eq7 {
        hard_checks.push(HardCheck { name: "integral_identity", holds: e.holds(opts.target_width) });
    }

    let rho_lit = witness.rho.to_literal();
    let house_rho_flags = house_rho.flags();
    let bound_chain_flags = bound_chain.as_ref().map_or(Flag::Undecided, BoundChainReport::flags);
    let mut echo = spec.raw.clone();
    if let Some(obj) = echo.as_object_mut() {
        obj.insert("precision_bits".into(), Value::from(prec.max(chain_prec)));
    }
    Ok(PipelineReport {
        echo,
        field: inst.field().describe(),
        mode: inst.mode(),
        params: ParamsJson::from(&params),
        c_den: consts.c_den.to_string(),
        c_basis: consts.c_basis.to_string(),
        matrix_house,
        eta: EtaStats {
            nonzero: sol.eta.iter().filter(|e| !e.is_zero()).count(),
            max_house_log10: sol.house_bound.lhs_log10,
            vanishing_verified: sol.vanishing_verified,
            house_bound: sol.house_bound.clone(),
            house_bound_pre_lift: sol.house_bound_pre_lift.clone(),
        },
        siegel: sol.siegel,
        injectivity,
        witness: WitnessJson {
            r: witness.r,
            l0: witness.l0,
            rho_nonzero: !witness.rho.is_zero(),
            rho: (rho_lit.len() <= 400).then_some(rho_lit),
            house_rho_log10: house_rho.house_rho_log10,
        },
        norm,
        house_rho,
        house_rho_flags,
        bound_chain,
        bound_chain_flags,
        bound_chain_error,
        eq7,
        constants: consts.to_json(),
        threshold,
        threshold_error,
        hard_checks,
        precision_bits: prec,
        timings_ms: clock.timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn synthetic_run() {
        let spec = InstanceSpec::from_json(&json!({
            "field": {"poly": [-2, 0, 1]},
            "alpha": 2, "beta": "1/2", "gamma": "x",
            "sigma_index": 1, "q": 4, "mode": "synthetic", "m": 2, "n": 2
        }))
        .unwrap();
        let rep = run_pipeline(&spec, &PipelineOptions::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failed_checks());
        assert!(rep.witness.r >= 2);
        assert!(!rep.injectivity.injective);
        assert!(rep.eq7.as_ref().unwrap().overlap);
        let again = run_pipeline(&spec, &PipelineOptions::default()).unwrap();
        assert_eq!(rep.without_timings(), again.without_timings());
        // The echo reproduces the run.
        let echoed = InstanceSpec::from_json(&rep.echo).unwrap();
        let from_echo = run_pipeline(&echoed, &PipelineOptions::default()).unwrap();
        assert_eq!(from_echo.witness.r, rep.witness.r);
        assert_eq!(from_echo.norm.norm_rho, rep.norm.norm_rho);
    }

    #[test]
    fn retry_doubles_until_cap() {
        let mut seen = Vec::new();
        let (r, p): (Result<()>, u32) = with_precision_retry(128, |p| {
            seen.push(p);
            Err(Error::PrecisionExhausted("x".into()))
        });
        assert!(r.is_err());
        assert_eq!((seen, p), (vec![128, 256, 512, 1024], 1024));
    }
}
