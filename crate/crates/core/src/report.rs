//! Certified comparisons shared by the reports.

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::ball::Interval;
use crate::error::{Error, Result};

/// Outcome of a comparison between enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Holds,
    Fails,
    /// The enclosures overlap at the working precision.
    Undecided,
}

impl Flag {
    pub fn holds(self) -> bool {
        self == Flag::Holds
    }

    pub fn and(self, other: Flag) -> Flag {
        match (self, other) {
            (Flag::Fails, _) | (_, Flag::Fails) => Flag::Fails,
            (Flag::Holds, Flag::Holds) => Flag::Holds,
            _ => Flag::Undecided,
        }
    }

    pub fn from_bool(b: bool) -> Flag {
        if b {
            Flag::Holds
        } else {
            Flag::Fails
        }
    }
}

/// `lhs ≤ rhs` for two quantities given by enclosures of their natural logs.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    /// Upper bound of `log₁₀ lhs`.
    pub lhs_log10: f64,
    /// Lower bound of `log₁₀ rhs`.
    pub rhs_log10: f64,
    pub holds: Flag,
}

impl Comparison {
    pub fn of_logs(lhs_ln: &Interval, rhs_ln: &Interval) -> Comparison {
        let holds = if lhs_ln.hi() <= rhs_ln.lo() {
            Flag::Holds
        } else if lhs_ln.lo() > rhs_ln.hi() {
            Flag::Fails
        } else {
            Flag::Undecided
        };
        Comparison { lhs_log10: ln_to_log10_upper(lhs_ln), rhs_log10: ln_to_log10_lower(rhs_ln), holds }
    }
}

/// Upper bound of `log₁₀ x` given an enclosure of `ln x`.
pub fn ln_to_log10_upper(ln: &Interval) -> f64 {
    let l10 = Interval::from_int(ln.prec(), 10).ln().unwrap();
    ln.div(&l10).map(|v| v.hi().to_f64_round(rug::float::Round::Up)).unwrap_or(f64::INFINITY)
}

/// Lower bound of `log₁₀ x` given an enclosure of `ln x`.
pub fn ln_to_log10_lower(ln: &Interval) -> f64 {
    let l10 = Interval::from_int(ln.prec(), 10).ln().unwrap();
    ln.div(&l10).map(|v| v.lo().to_f64_round(rug::float::Round::Down)).unwrap_or(f64::NEG_INFINITY)
}

/// Enclosure of `ln x` for a positive enclosure `x`.
pub fn ln_pos(x: &Interval) -> Result<Interval> {
    x.ln()
}

pub fn ln_int(prec: u32, x: &Integer) -> Result<Interval> {
    if *x <= 0 {
        return Err(Error::ParamError(format!("logarithm of non-positive {x}")));
    }
    Interval::from_integer(prec, x).ln()
}

pub fn ln_u(prec: u32, x: u64) -> Interval {
    Interval::from_integer(prec, &Integer::from(x)).ln().expect("positive")
}

pub fn ln_rational(prec: u32, x: &Rational) -> Result<Interval> {
    if *x <= 0 {
        return Err(Error::ParamError(format!("logarithm of non-positive {x}")));
    }
    Interval::from_rational(prec, x).ln()
}

/// `e · ln r`, with the convention `0^e = 1`.
pub fn ln_power_of(prec: u32, r: u64, e: &Interval) -> Interval {
    if r == 0 {
        Interval::from_int(prec, 0)
    } else {
        ln_u(prec, r).mul(e)
    }
}

/// Enclosure of `ln(r!)`.
pub fn ln_factorial(prec: u32, r: u64) -> Interval {
    let f = Integer::from(Integer::factorial(r as u32));
    Interval::from_integer(prec, &f).ln().expect("positive")
}

/// Midpoint and radius of an interval, for JSON.
pub fn interval_json(x: &Interval) -> serde_json::Value {
    serde_json::json!({
        "lo": x.lo().to_f64_round(rug::float::Round::Down),
        "hi": x.hi().to_f64_round(rug::float::Round::Up),
        "log10_upper": if x.hi().is_sign_positive() && !x.hi().is_zero() { crate::ball::log10_up(x.hi()) } else { f64::NEG_INFINITY },
    })
}

pub fn float_string(x: &Float, digits: usize) -> String {
    crate::ball::fmt_float(x, digits)
}
