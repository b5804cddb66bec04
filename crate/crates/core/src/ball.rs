//! Certified real intervals and complex balls over MPFR.
//!
//! Every operation returns an enclosure of the exact image of its inputs:
//! intervals carry outward-rounded endpoints, and complex balls fold the
//! rounding error of the midpoint computation into the radius.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Precision used for radii; radii are only ever rounded upward.
pub const RAD_PREC: u32 = 64;

fn down<T>(prec: u32, src: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, src, Round::Down).0
}

fn up<T>(prec: u32, src: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, src, Round::Up).0
}

fn rad<T>(src: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    up(RAD_PREC, src)
}

fn zero_rad() -> Float {
    Float::with_val(RAD_PREC, 0)
}

/// Closed real interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl Interval {
    /// Builds `[lo, hi]`; the caller guarantees `lo ≤ hi`.
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Float) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(prec: u32, x: i64) -> Self {
        Interval { lo: down(prec, x), hi: up(prec, x) }
    }

    pub fn from_integer(prec: u32, x: &Integer) -> Self {
        Interval { lo: down(prec, x), hi: up(prec, x) }
    }

    pub fn from_rational(prec: u32, x: &Rational) -> Self {
        Interval { lo: down(prec, x), hi: up(prec, x) }
    }

    pub fn pi(prec: u32) -> Self {
        Interval { lo: down(prec, Constant::Pi), hi: up(prec, Constant::Pi) }
    }

    pub fn ln2(prec: u32) -> Self {
        Interval { lo: down(prec, Constant::Log2), hi: up(prec, Constant::Log2) }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn width(&self) -> Float {
        rad(&self.hi - &self.lo)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if self.lo < other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi > other.hi { self.hi.clone() } else { other.hi.clone() };
        Interval { lo, hi }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: Float::with_val(self.hi.prec(), -&self.hi), hi: Float::with_val(self.lo.prec(), -&self.lo) }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval { lo: down(p, &self.lo + &o.lo), hi: up(p, &self.hi + &o.hi) }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval { lo: down(p, &self.lo - &o.hi), hi: up(p, &self.hi - &o.lo) }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        if self.lo >= 0 && o.lo >= 0 {
            return Interval { lo: down(p, &self.lo * &o.lo), hi: up(p, &self.hi * &o.hi) };
        }
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo = down(p, pairs[0].0 * pairs[0].1);
        let mut hi = up(p, pairs[0].0 * pairs[0].1);
        for (a, b) in &pairs[1..] {
            let l = down(p, *a * *b);
            let h = up(p, *a * *b);
            if l < lo {
                lo = l;
            }
            if h > hi {
                hi = h;
            }
        }
        Interval { lo, hi }
    }

    /// Multiplication by a point, cheaper than the general product.
    pub fn mul_float(&self, x: &Float) -> Interval {
        self.mul(&Interval::point(x.clone()))
    }

    pub fn sqr(&self) -> Interval {
        let p = self.prec();
        if self.lo >= 0 {
            Interval { lo: down(p, self.lo.square_ref()), hi: up(p, self.hi.square_ref()) }
        } else if self.hi <= 0 {
            Interval { lo: down(p, self.hi.square_ref()), hi: up(p, self.lo.square_ref()) }
        } else {
            let a = up(p, self.lo.square_ref());
            let b = up(p, self.hi.square_ref());
            Interval { lo: Float::with_val(p, 0), hi: if a > b { a } else { b } }
        }
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        if o.contains_zero() {
            return Err(Error::PrecisionExhausted("interval division by an enclosure of zero".into()));
        }
        let p = self.prec().max(o.prec());
        let inv = Interval { lo: down(p, o.hi.recip_ref()), hi: up(p, o.lo.recip_ref()) };
        Ok(self.mul(&inv))
    }

    pub fn sqrt(&self) -> Interval {
        let p = self.prec();
        let lo = if self.lo > 0 { down(p, self.lo.sqrt_ref()) } else { Float::with_val(p, 0) };
        let hi = if self.hi > 0 { up(p, self.hi.sqrt_ref()) } else { Float::with_val(p, 0) };
        Interval { lo, hi }
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec();
        Interval { lo: down(p, self.lo.exp_ref()), hi: up(p, self.hi.exp_ref()) }
    }

    /// Natural logarithm; requires a strictly positive interval.
    pub fn ln(&self) -> Result<Interval> {
        if self.lo <= 0 {
            return Err(Error::PrecisionExhausted("logarithm of an interval touching zero".into()));
        }
        let p = self.prec();
        Ok(Interval { lo: down(p, self.lo.ln_ref()), hi: up(p, self.hi.ln_ref()) })
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let a = Float::with_val(self.lo.prec(), -&self.lo);
            let hi = if a > self.hi { a } else { self.hi.clone() };
            Interval { lo: Float::with_val(self.prec(), 0), hi }
        }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        let lo = if self.lo > o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi > o.hi { self.hi.clone() } else { o.hi.clone() };
        Interval { lo, hi }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, e: u32) -> Interval {
        let mut result = Interval::from_int(self.prec(), 1);
        let mut base = self.clone();
        let mut e = e;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first { base.clone() } else { result.mul(&base) };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    /// Midpoint rounded to nearest.
    pub fn mid(&self) -> Float {
        let p = self.prec();
        let mut m = Float::with_val(p + 1, &self.lo + &self.hi);
        m /= 2;
        Float::with_val(p, m)
    }

    /// Upper bound for `log₁₀` of the upper endpoint (which must be positive).
    pub fn log10_upper(&self) -> f64 {
        log10_up(&self.hi)
    }

    pub fn log10_lower(&self) -> f64 {
        log10_down(&self.lo)
    }
}

/// `log₁₀ x` rounded up to an `f64`, for `x > 0`.
pub fn log10_up(x: &Float) -> f64 {
    let p = x.prec().max(64);
    up(p, x.log10_ref()).to_f64_round(Round::Up)
}

/// `log₁₀ x` rounded down to an `f64`, for `x > 0`.
pub fn log10_down(x: &Float) -> f64 {
    let p = x.prec().max(64);
    down(p, x.log10_ref()).to_f64_round(Round::Down)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_float(&self.lo, 20), fmt_float(&self.hi, 20))
    }
}

/// Scientific rendering with `digits` significant digits.
pub fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits))
}

/// Complex ball `{z : |z − (re + i·im)| ≤ rad}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CBall {
    re: Float,
    im: Float,
    rad: Float,
}

impl CBall {
    pub fn zero(prec: u32) -> Self {
        CBall { re: Float::with_val(prec, 0), im: Float::with_val(prec, 0), rad: zero_rad() }
    }

    pub fn one(prec: u32) -> Self {
        CBall::from_int(prec, 1)
    }

    /// Exact point ball.
    pub fn point(re: Float, im: Float) -> Self {
        CBall { re, im, rad: zero_rad() }
    }

    pub fn with_rad(re: Float, im: Float, radius: Float) -> Self {
        debug_assert!(radius >= 0);
        CBall { re, im, rad: rad(&radius) }
    }

    pub fn from_int(prec: u32, x: i64) -> Self {
        CBall::from_real(&Interval::from_int(prec, x))
    }

    pub fn from_rational(prec: u32, x: &Rational) -> Self {
        CBall::from_real(&Interval::from_rational(prec, x))
    }

    pub fn from_real(x: &Interval) -> Self {
        CBall::from_intervals(x, &Interval::point(Float::with_val(x.prec(), 0)))
    }

    /// Smallest centred ball (up to rounding) containing the rectangle `re × im`.
    pub fn from_intervals(re: &Interval, im: &Interval) -> Self {
        let (rm, rr) = centre(re);
        let (im_mid, ir) = centre(im);
        CBall { re: rm, im: im_mid, rad: rad(&rr + &ir) }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Diameter `2·rad`.
    pub fn width(&self) -> Float {
        rad(&self.rad * 2u32)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// The midpoint as an exact ball.
    pub fn mid(&self) -> CBall {
        CBall { re: self.re.clone(), im: self.im.clone(), rad: zero_rad() }
    }

    /// Same ball with the radius enlarged by `extra`.
    pub fn inflate(&self, extra: &Float) -> CBall {
        CBall { re: self.re.clone(), im: self.im.clone(), rad: rad(&self.rad + extra) }
    }

    /// Real part as an interval.
    pub fn re_interval(&self) -> Interval {
        Interval {
            lo: down(self.re.prec(), &self.re - &self.rad),
            hi: up(self.re.prec(), &self.re + &self.rad),
        }
    }

    pub fn im_interval(&self) -> Interval {
        Interval {
            lo: down(self.im.prec(), &self.im - &self.rad),
            hi: up(self.im.prec(), &self.im + &self.rad),
        }
    }

    /// Upper bound of `|mid|`.
    fn mid_abs_up(&self) -> Float {
        up(RAD_PREC, self.re.hypot_ref(&self.im))
    }

    /// Lower bound of `|mid|`.
    fn mid_abs_down(&self) -> Float {
        down(RAD_PREC.max(self.prec()), self.re.hypot_ref(&self.im))
    }

    /// Upper bound of `|z|` over the ball.
    pub fn abs_upper(&self) -> Float {
        rad(&self.mid_abs_up() + &self.rad)
    }

    /// Lower bound of `|z|` over the ball (zero if the ball contains 0).
    pub fn abs_lower(&self) -> Float {
        let m = self.mid_abs_down();
        let d = down(m.prec(), &m - &self.rad);
        if d < 0 {
            Float::with_val(RAD_PREC, 0)
        } else {
            d
        }
    }

    /// Enclosure of `|z|`.
    pub fn abs(&self) -> Interval {
        let p = self.prec();
        let m_lo = down(p, self.re.hypot_ref(&self.im));
        let m_hi = up(p, self.re.hypot_ref(&self.im));
        let lo = down(p, &m_lo - &self.rad);
        let lo = if lo < 0 { Float::with_val(p, 0) } else { lo };
        Interval { lo, hi: up(p, &m_hi + &self.rad) }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid_abs_down() <= self.rad
    }

    /// True when the ball certainly does not contain zero.
    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// Whether the two balls may intersect.
    pub fn overlaps(&self, other: &CBall) -> bool {
        let p = self.prec().max(other.prec());
        let dr = Interval::point(self.re.clone()).sub(&Interval::point(other.re.clone()));
        let di = Interval::point(self.im.clone()).sub(&Interval::point(other.im.clone()));
        let dist = dr.sqr().add(&di.sqr()).sqrt();
        let reach = Float::with_val_round(p.max(RAD_PREC), &self.rad + &other.rad, Round::Up).0;
        *dist.lo() <= reach
    }

    /// Whether the two balls are certainly disjoint.
    pub fn disjoint(&self, other: &CBall) -> bool {
        !self.overlaps(other)
    }

    /// Whether `other` lies inside `self`.
    pub fn contains_ball(&self, other: &CBall) -> bool {
        let dr = Interval::point(self.re.clone()).sub(&Interval::point(other.re.clone()));
        let di = Interval::point(self.im.clone()).sub(&Interval::point(other.im.clone()));
        let dist = dr.sqr().add(&di.sqr()).sqrt();
        let need = up(dist.prec().max(RAD_PREC), dist.hi() + &other.rad);
        need <= self.rad
    }

    pub fn neg(&self) -> CBall {
        CBall { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im), rad: self.rad.clone() }
    }

    pub fn conj(&self) -> CBall {
        CBall { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im), rad: self.rad.clone() }
    }

    pub fn add(&self, o: &CBall) -> CBall {
        let p = self.prec().max(o.prec());
        let re = Interval { lo: down(p, &self.re + &o.re), hi: up(p, &self.re + &o.re) };
        let im = Interval { lo: down(p, &self.im + &o.im), hi: up(p, &self.im + &o.im) };
        CBall::from_intervals(&re, &im).inflate(&rad(&self.rad + &o.rad))
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        let p = self.prec().max(o.prec());
        let (a, b, c, d) = (pt(&self.re), pt(&self.im), pt(&o.re), pt(&o.im));
        let re = a.mul(&c).sub(&b.mul(&d));
        let im = a.mul(&d).add(&b.mul(&c));
        let core = CBall::from_intervals(&re, &im);
        let _ = p;
        if self.rad.is_zero() && o.rad.is_zero() {
            return core;
        }
        let extra = rad(&self.mid_abs_up() * &o.rad) + rad(&o.mid_abs_up() * &self.rad) + rad(&self.rad * &o.rad);
        core.inflate(&rad(&extra))
    }

    /// Multiplication by an exact real.
    pub fn mul_real(&self, x: &Interval) -> CBall {
        let re = pt(&self.re).mul(x);
        let im = pt(&self.im).mul(x);
        let scale = x.abs();
        CBall::from_intervals(&re, &im).inflate(&rad(&self.rad * scale.hi()))
    }

    pub fn mul_int(&self, k: i64) -> CBall {
        self.mul_real(&Interval::from_int(self.prec(), k))
    }

    pub fn sqr(&self) -> CBall {
        self.mul(self)
    }

    /// `1/z`; fails when the ball may contain zero.
    pub fn inv(&self) -> Result<CBall> {
        let m_lo = self.mid_abs_down();
        if m_lo <= self.rad {
            return Err(Error::PrecisionExhausted("inverse of a ball containing zero".into()));
        }
        let (x, y) = (pt(&self.re), pt(&self.im));
        let n2 = x.sqr().add(&y.sqr());
        let re = x.div(&n2)?;
        let im = y.neg().div(&n2)?;
        let core = CBall::from_intervals(&re, &im);
        if self.rad.is_zero() {
            return Ok(core);
        }
        let gap = down(RAD_PREC, &m_lo - &self.rad);
        let denom = down(RAD_PREC, &m_lo * &gap);
        Ok(core.inflate(&rad(&self.rad / &denom)))
    }

    pub fn div(&self, o: &CBall) -> Result<CBall> {
        Ok(self.mul(&o.inv()?))
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, e: u32) -> CBall {
        let mut result = CBall::one(self.prec());
        let mut base = self.clone();
        let mut e = e;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first { base.clone() } else { result.mul(&base) };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    pub fn exp(&self) -> CBall {
        let p = self.prec();
        let ex = Interval::point(self.re.clone()).exp();
        let cos = Interval { lo: down(p, self.im.cos_ref()), hi: up(p, self.im.cos_ref()) };
        let sin = Interval { lo: down(p, self.im.sin_ref()), hi: up(p, self.im.sin_ref()) };
        let core = CBall::from_intervals(&ex.mul(&cos), &ex.mul(&sin));
        if self.rad.is_zero() {
            return core;
        }
        // |e^{z+h} − e^z| ≤ |e^z| (e^{|h|} − 1).
        let grow = rad(self.rad.exp_m1_ref());
        core.inflate(&rad(ex.hi() * &grow))
    }

    /// Principal logarithm; fails when the ball meets the branch cut `(−∞, 0]`.
    pub fn ln(&self) -> Result<CBall> {
        let p = self.prec();
        let left = down(p, &self.re - &self.rad);
        let clear_of_cut = left > 0 || Float::with_val(p, self.im.abs_ref()) > self.rad;
        if !clear_of_cut || self.contains_zero() {
            return Err(Error::PrecisionExhausted("logarithm near the branch cut".into()));
        }
        let n2 = pt(&self.re).sqr().add(&pt(&self.im).sqr());
        let mut half_ln = n2.ln()?;
        half_ln = Interval { lo: down(p, half_ln.lo() / 2u32), hi: up(p, half_ln.hi() / 2u32) };
        let arg = Interval { lo: down(p, self.im.atan2_ref(&self.re)), hi: up(p, self.im.atan2_ref(&self.re)) };
        let core = CBall::from_intervals(&half_ln, &arg);
        if self.rad.is_zero() {
            return Ok(core);
        }
        // |Log(z + h) − Log z| ≤ −ln(1 − x) ≤ x/(1 − x) with x = |h|/|z|.
        let ratio = rad(&self.rad / &self.mid_abs_down());
        let one_minus = down(RAD_PREC, 1u32 - &ratio);
        let bound = rad(&ratio / &one_minus);
        Ok(core.inflate(&bound))
    }

    /// Encloses `2πi`.
    pub fn two_pi_i(prec: u32) -> CBall {
        let pi = Interval::pi(prec);
        let two_pi = Interval { lo: down(prec, pi.lo() * 2u32), hi: up(prec, pi.hi() * 2u32) };
        CBall::from_intervals(&Interval::point(Float::with_val(prec, 0)), &two_pi)
    }

    /// `e^{iθ}` for a real enclosure `θ`.
    pub fn cis(theta: &Interval) -> CBall {
        let p = theta.prec();
        CBall::from_intervals(&Interval::point(Float::with_val(p, 0)), theta).exp()
    }

    /// Same ball rounded to a new midpoint precision.
    pub fn set_prec(&self, prec: u32) -> CBall {
        let re = Interval { lo: down(prec, &self.re), hi: up(prec, &self.re) };
        let im = Interval { lo: down(prec, &self.im), hi: up(prec, &self.im) };
        CBall::from_intervals(&re, &im).inflate(&self.rad)
    }

    /// Midpoint as a pair of `f64`.
    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

fn pt(x: &Float) -> Interval {
    Interval::point(x.clone())
}

/// Midpoint and half-width (rounded up) of an interval.
fn centre(iv: &Interval) -> (Float, Float) {
    if iv.lo == iv.hi {
        return (iv.lo.clone(), zero_rad());
    }
    let m = iv.mid();
    let a = rad(&iv.hi - &m);
    let b = rad(&m - &iv.lo);
    (m, if a > b { a } else { b })
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}i) ± {}",
            fmt_float(&self.re, 20),
            fmt_float(&self.im, 20),
            fmt_float(&self.rad, 3)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    #[test]
    fn sqrt_two_interval() {
        let s = Interval::from_int(P, 2).sqrt();
        assert!(s.sqr().contains(&Float::with_val(P, 2)));
        assert!(s.width() < Float::with_val(64, 1e-35));
    }

    #[test]
    fn ball_product_contains_exact() {
        let a = CBall::from_rational(P, &Rational::from((1, 3)));
        let b = CBall::from_int(P, 3);
        assert!(a.mul(&b).overlaps(&CBall::one(P)));
        assert!(a.mul(&b).sub(&CBall::one(P)).contains_zero());
    }

    #[test]
    fn exp_log_roundtrip() {
        let z = CBall::point(Float::with_val(P, -0.5), Float::with_val(P, 2.25));
        let back = z.exp().ln().unwrap();
        assert!(back.overlaps(&z));
        assert!(back.rad() < &Float::with_val(64, 1e-30));
    }

    #[test]
    fn euler_identity() {
        let e = CBall::cis(&Interval::pi(P)).add(&CBall::one(P));
        assert!(e.contains_zero());
        assert!(e.rad() < &Float::with_val(64, 1e-30));
    }

    #[test]
    fn inverse_encloses() {
        let z = CBall::with_rad(Float::with_val(P, 2), Float::with_val(P, 1), Float::with_val(64, 0.1));
        let w = z.inv().unwrap();
        // 1/(2 + i) = (2 − i)/5
        assert!(w.overlaps(&CBall::point(Float::with_val(P, 0.4), Float::with_val(P, -0.2))));
        assert!(CBall::zero(P).inv().is_err());
    }

    #[test]
    fn branch_cut_rejected() {
        let z = CBall::with_rad(Float::with_val(P, -1), Float::with_val(P, 0), Float::with_val(64, 0.01));
        assert!(z.ln().is_err());
    }
}
