//! Dense univariate polynomials over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Polynomial with rational coefficients, lowest degree first.
///
/// The zero polynomial has no coefficients, so `coeffs().last()` is the
/// leading coefficient whenever it exists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Rational::from(1))
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        QPoly::new(vec![Rational::new(), Rational::from(1)])
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    /// Builds a polynomial from coefficients (lowest first), trimming zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| *c == 0) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints<I: Into<Integer> + Clone>(coeffs: &[I]) -> Self {
        QPoly::new(coeffs.iter().cloned().map(|c| Rational::from(c.into())).collect())
    }

    pub fn from_integers(coeffs: &[Integer]) -> Self {
        QPoly::new(coeffs.iter().map(|c| Rational::from(c.clone())).collect())
    }

    /// `x - c`.
    pub fn linear_root(c: Rational) -> Self {
        QPoly::new(vec![-c, Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map_or(false, |c| *c == 1)
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| *c.denom() == 1)
    }

    /// Integer coefficients; `None` if some coefficient is fractional.
    pub fn integer_coeffs(&self) -> Option<Vec<Integer>> {
        self.coeffs
            .iter()
            .map(|c| (*c.denom() == 1).then(|| c.numer().clone()))
            .collect()
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> Integer {
        self.coeffs
            .iter()
            .fold(Integer::from(1), |acc, c| acc.lcm(c.denom()))
    }

    /// Scales to a primitive integer polynomial with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<Integer> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self.denominator_lcm();
        let mut ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| Integer::from(c.numer() * Integer::from(&den / c.denom())))
            .collect();
        let g = ints.iter().fold(Integer::new(), |g, c| g.gcd(c));
        let sign = if *ints.last().unwrap() < 0 { -1 } else { 1 };
        for c in ints.iter_mut() {
            *c /= &g;
            *c *= sign;
        }
        ints
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => QPoly::zero(),
            Some(lc) => {
                let inv = Rational::from(lc.recip_ref());
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return QPoly::zero();
        }
        QPoly::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn derivative(&self) -> Self {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * Integer::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = QPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = divisor * quotient + remainder` and `deg(remainder) < deg(divisor)`.
    pub fn div_rem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lc = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return Ok((QPoly::zero(), QPoly::zero()));
        };
        if sd < dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::new(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let c = Rational::from(&rem[i + dd] / lc);
            if c != 0 {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= Rational::from(&c * d);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((QPoly::new(quot), QPoly::new(rem)))
    }

    pub fn rem(&self, divisor: &QPoly) -> Result<QPoly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Squarefree part `p / gcd(p, p')`, made monic.
    pub fn squarefree_part(&self) -> QPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd is nonzero").0.monic()
    }

    /// Formats the polynomial using `var` as the indeterminate.
    pub fn to_string_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let negative = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&abs.to_string());
            } else if abs == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("x"))
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        QPoly::new(out)
    }
}

impl Add for QPoly {
    type Output = QPoly;
    fn add(self, rhs: QPoly) -> QPoly {
        &self + &rhs
    }
}

impl Sub for QPoly {
    type Output = QPoly;
    fn sub(self, rhs: QPoly) -> QPoly {
        &self - &rhs
    }
}

impl Mul for QPoly {
    type Output = QPoly;
    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn zero_is_empty() {
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0, 0]).degree(), None);
        assert_eq!(p(&[3]).degree(), Some(0));
    }

    #[test]
    fn division_identity() {
        let a = p(&[-2, 0, 0, 1, 5]);
        let b = p(&[1, 2, 3]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&b * &q) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_of_products() {
        let f = &p(&[-1, 1]) * &p(&[2, 0, 1]);
        let g = &p(&[-1, 1]) * &p(&[3, 1]);
        assert_eq!(f.gcd(&g), p(&[-1, 1]));
    }

    #[test]
    fn squarefree() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[1, 1]);
        assert_eq!(f.squarefree_part(), p(&[-1, 0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-2, 0, 1]).to_string(), "x^2 - 2");
        let half = QPoly::new(vec![Rational::from((1, 2)), Rational::from(3)]);
        assert_eq!(half.to_string(), "3*x + 1/2");
        assert_eq!(QPoly::zero().to_string(), "0");
    }

    #[test]
    fn primitive_scaling() {
        let f = QPoly::new(vec![Rational::from((-2, 9)), Rational::new(), Rational::from(1)]);
        assert_eq!(f.primitive_integer(), vec![Integer::from(-2), Integer::new(), Integer::from(9)]);
    }
}
