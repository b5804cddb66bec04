//! Number fields `ℚ[x]/(f)` with certified complex embeddings.

mod irreducible;
pub mod parse;
pub mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::ball::{CBall, Interval};
use crate::error::{Error, Result};
use crate::exact::matrix::{rational_det, rational_matrix_inverse, RatMatrix};
use crate::exact::QPoly;
use irreducible::Verdict;
pub use parse::{element_from_json, parse_element, FieldSpec};
use roots::{isolate_roots, IsolatedRoot};

/// Precision ceiling for automatic refinement inside this module.
const MAX_REFINE_PREC: u32 = 1 << 15;

/// The field `ℚ[x]/(f)` for a monic irreducible integer polynomial `f`.
///
/// Embeddings are certified disjoint root enclosures sorted by midpoint, so
/// embedding `i` is the same conjugate at every precision.
pub struct NumberField {
    poly: QPoly,
    roots: Vec<IsolatedRoot>,
    precision: u32,
    /// Power-basis coordinates of `θ^k` for `k < 2h − 1`.
    powers: Vec<Vec<Rational>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("poly", &self.poly.to_string())
            .field("precision", &self.precision)
            .finish()
    }
}

/// Builds `ℚ[x]/(f)`, verifying irreducibility exactly.
pub fn make_field(f: &QPoly, precision: u32) -> Result<Arc<NumberField>> {
    let h = f.degree().ok_or_else(|| Error::InvalidPolynomial("zero polynomial".into()))?;
    if h == 0 {
        return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
    }
    if !f.is_monic() || !f.has_integer_coeffs() {
        return Err(Error::InvalidPolynomial(format!("{f} is not monic with integer coefficients")));
    }
    let g = f.gcd(&f.derivative());
    if g.degree() != Some(0) {
        return Err(Error::Reducible(format!("{f} has the repeated factor {g}")));
    }
    let mut prec = precision.max(32);
    loop {
        let roots = isolate_roots(f, prec)?;
        match irreducible::decide(f, &roots) {
            Verdict::Irreducible => {
                let roots = if prec == precision.max(32) { roots } else { isolate_roots(f, precision.max(32))? };
                return Ok(Arc::new(NumberField::from_parts(f.clone(), roots, precision.max(32))));
            }
            Verdict::Factor(g) => return Err(Error::Reducible(format!("{f} is divisible by {g}"))),
            Verdict::Undecided if prec < MAX_REFINE_PREC => prec *= 2,
            Verdict::Undecided => {
                return Err(Error::PrecisionExhausted(format!("irreducibility of {f} undecided")))
            }
        }
    }
}

impl NumberField {
    fn from_parts(poly: QPoly, roots: Vec<IsolatedRoot>, precision: u32) -> Self {
        let h = poly.degree().unwrap();
        let mut powers = Vec::with_capacity(2 * h);
        let mut cur = vec![Rational::new(); h];
        cur[0] = Rational::from(1);
        for _ in 0..(2 * h).saturating_sub(1).max(1) {
            powers.push(cur.clone());
            cur = times_theta(&poly, &cur);
        }
        NumberField { poly, roots, precision, powers }
    }

    /// The rationals as `ℚ[x]/(x)`.
    pub fn rationals(precision: u32) -> Arc<NumberField> {
        let poly = QPoly::x();
        let roots = vec![IsolatedRoot { ball: CBall::zero(precision), real: true }];
        Arc::new(NumberField::from_parts(poly, roots, precision))
    }

    /// The same field with embeddings recomputed at another precision.
    pub fn with_precision(&self, precision: u32) -> Result<Arc<NumberField>> {
        let roots = if self.degree() == 1 {
            vec![IsolatedRoot {
                ball: CBall::from_rational(precision, &-self.poly.coeff(0)),
                real: true,
            }]
        } else {
            isolate_roots(&self.poly, precision)?
        };
        Ok(Arc::new(NumberField::from_parts(self.poly.clone(), roots, precision)))
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap()
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Enclosure of the `i`-th conjugate of `θ`.
    pub fn embedding(&self, i: usize) -> &CBall {
        &self.roots[i].ball
    }

    pub fn embeddings(&self) -> Vec<CBall> {
        self.roots.iter().map(|r| r.ball.clone()).collect()
    }

    pub fn is_real_embedding(&self, i: usize) -> bool {
        self.roots[i].real
    }

    /// Whether two fields share the defining polynomial.
    pub fn same_as(&self, other: &NumberField) -> bool {
        std::ptr::eq(self, other) || self.poly == other.poly
    }

    /// The JSON description `{"poly": [...], "precision_bits": ...}`.
    pub fn describe(&self) -> serde_json::Value {
        let ints = self.poly.integer_coeffs().unwrap_or_default();
        serde_json::json!({
            "poly": ints.iter().map(|c| serde_json::Value::String(c.to_string())).collect::<Vec<_>>(),
            "precision_bits": self.precision,
        })
    }
}

/// Multiplies power-basis coordinates by `θ` and reduces modulo `f`.
fn times_theta(poly: &QPoly, coords: &[Rational]) -> Vec<Rational> {
    let h = coords.len();
    let top = coords[h - 1].clone();
    let mut out = vec![Rational::new(); h];
    for i in (1..h).rev() {
        out[i] = coords[i - 1].clone();
    }
    if top != 0 {
        for (i, o) in out.iter_mut().enumerate() {
            *o -= Rational::from(&top * poly.coeffs()[i].clone());
        }
    }
    out
}

/// An element of a number field in power-basis coordinates.
#[derive(Clone)]
pub struct NFElement {
    field: Arc<NumberField>,
    coords: Vec<Rational>,
}

/// Certified enclosure of a house.
#[derive(Clone, Debug, PartialEq)]
pub struct HouseValue {
    pub value: Interval,
}

impl HouseValue {
    pub fn upper(&self) -> &Float {
        self.value.hi()
    }

    pub fn lower(&self) -> &Float {
        self.value.lo()
    }
}

impl fmt::Debug for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NFElement({self})")
    }
}

impl PartialEq for NFElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.coords == other.coords
    }
}

impl NFElement {
    pub fn new(field: &Arc<NumberField>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::ShapeError(format!(
                "{} coordinates for a degree {} field",
                coords.len(),
                field.degree()
            )));
        }
        Ok(NFElement { field: field.clone(), coords })
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        let mut coords = vec![Rational::new(); field.degree()];
        coords[0] = q;
        NFElement { field: field.clone(), coords }
    }

    pub fn from_int(field: &Arc<NumberField>, k: i64) -> Self {
        NFElement::from_rational(field, Rational::from(k))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        NFElement::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        NFElement::from_int(field, 1)
    }

    /// The generator `θ = x mod f`.
    pub fn theta(field: &Arc<NumberField>) -> Self {
        let coords = field.powers.get(1).cloned().unwrap_or_else(|| times_theta(&field.poly, &field.powers[0]));
        NFElement { field: field.clone(), coords }
    }

    /// Element given by a polynomial in `θ`.
    pub fn from_poly(field: &Arc<NumberField>, p: &QPoly) -> Result<Self> {
        let r = p.rem(&field.poly)?;
        let mut coords = r.into_coeffs();
        coords.resize(field.degree(), Rational::new());
        Ok(NFElement { field: field.clone(), coords })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The same element viewed in a field with the same polynomial.
    pub fn in_field(&self, field: &Arc<NumberField>) -> NFElement {
        assert!(self.field.same_as(field), "elements of different fields");
        NFElement { field: field.clone(), coords: self.coords.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    /// `Some(q)` when the element is the rational `q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coords[1..].iter().all(|c| *c == 0).then(|| self.coords[0].clone())
    }

    pub fn has_integer_coords(&self) -> bool {
        self.coords.iter().all(|c| *c.denom() == 1)
    }

    pub fn integer_coords(&self) -> Option<Vec<Integer>> {
        self.coords.iter().map(|c| (*c.denom() == 1).then(|| c.numer().clone())).collect()
    }

    fn check_field(&self, other: &NFElement) {
        assert!(self.field.same_as(&other.field), "elements of different fields");
    }

    pub fn scale(&self, q: &Rational) -> NFElement {
        NFElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| Rational::from(c * q)).collect(),
        }
    }

    pub fn scale_int(&self, k: &Integer) -> NFElement {
        NFElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| Rational::from(c * k)).collect(),
        }
    }

    fn mul_ref(&self, other: &NFElement) -> NFElement {
        self.check_field(other);
        let h = self.coords.len();
        let mut prod = vec![Rational::new(); 2 * h - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if *b != 0 {
                    prod[i + j] += Rational::from(a * b);
                }
            }
        }
        let mut coords: Vec<Rational> = prod[..h].to_vec();
        for (k, c) in prod.iter().enumerate().skip(h) {
            if *c == 0 {
                continue;
            }
            for (o, p) in coords.iter_mut().zip(&self.field.powers[k]) {
                if *p != 0 {
                    *o += Rational::from(c * p);
                }
            }
        }
        NFElement { field: self.field.clone(), coords }
    }

    pub fn pow(&self, e: u32) -> NFElement {
        let mut result = NFElement::one(&self.field);
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

    /// Matrix of `y ↦ self·y` in the power basis; column `j` holds `self·θ^j`.
    pub fn multiplication_matrix(&self) -> RatMatrix {
        let h = self.coords.len();
        let mut cols = Vec::with_capacity(h);
        let mut cur = self.coords.clone();
        for _ in 0..h {
            cols.push(cur.clone());
            cur = times_theta(&self.field.poly, &cur);
        }
        (0..h).map(|i| (0..h).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn inv(&self) -> Result<NFElement> {
        if self.is_zero() {
            return Err(Error::Singular);
        }
        let inv = rational_matrix_inverse(&self.multiplication_matrix())?;
        Ok(NFElement { field: self.field.clone(), coords: inv.into_iter().map(|row| row[0].clone()).collect() })
    }

    pub fn div(&self, other: &NFElement) -> Result<NFElement> {
        Ok(self * &other.inv()?)
    }

    /// Field norm, the determinant of the multiplication matrix.
    pub fn norm(&self) -> Rational {
        rational_det(&self.multiplication_matrix())
    }

    pub fn trace(&self) -> Rational {
        let m = self.multiplication_matrix();
        (0..m.len()).fold(Rational::new(), |acc, i| acc + &m[i][i])
    }

    /// Characteristic polynomial of the multiplication matrix (Faddeev–LeVerrier).
    pub fn charpoly(&self) -> QPoly {
        let a = self.multiplication_matrix();
        let n = a.len();
        let mut coeffs = vec![Rational::new(); n + 1];
        coeffs[n] = Rational::from(1);
        let mut m: RatMatrix = vec![vec![Rational::new(); n]; n];
        for k in 1..=n {
            // M_k = A·M_{k−1} + c_{n−k+1} I
            let mut next = vec![vec![Rational::new(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Rational::new();
                    for l in 0..n {
                        if a[i][l] != 0 && m[l][j] != 0 {
                            acc += Rational::from(&a[i][l] * &m[l][j]);
                        }
                    }
                    next[i][j] = acc;
                }
                next[i][i] += &coeffs[n - k + 1];
            }
            m = next;
            let mut tr = Rational::new();
            for i in 0..n {
                for l in 0..n {
                    if a[i][l] != 0 && m[l][i] != 0 {
                        tr += Rational::from(&a[i][l] * &m[l][i]);
                    }
                }
            }
            coeffs[n - k] = -tr / Rational::from(k as u32);
        }
        QPoly::new(coeffs)
    }

    /// Monic minimal polynomial over ℚ, the squarefree part of the characteristic polynomial.
    pub fn minpoly(&self) -> QPoly {
        self.charpoly().squarefree_part()
    }

    /// Least `k ≥ 1` clearing the denominators of the minimal polynomial.
    ///
    /// `minpoly(kα)(x) = Σ cᵢ k^{d−i} xⁱ`, so the lcm of the coefficient
    /// denominators always makes `kα` integral (not necessarily minimally).
    pub fn denominator_clearing_integer(&self) -> Integer {
        self.minpoly().denominator_lcm()
    }

    pub fn is_integral(&self) -> bool {
        self.minpoly().has_integer_coeffs()
    }

    /// Enclosure of `σᵢ(self)`.
    pub fn embed(&self, i: usize) -> CBall {
        let field = &self.field;
        let prec = field.precision;
        let root = &field.roots[i];
        if root.real {
            return CBall::from_real(&self.embed_real_interval(&root.ball.re_interval(), prec));
        }
        let mut acc = CBall::from_rational(prec, self.coords.last().unwrap());
        for c in self.coords.iter().rev().skip(1) {
            acc = acc.mul(&root.ball).add(&CBall::from_rational(prec, c));
        }
        acc
    }

    fn embed_real_interval(&self, x: &Interval, prec: u32) -> Interval {
        let mut acc = Interval::from_rational(prec, self.coords.last().unwrap());
        for c in self.coords.iter().rev().skip(1) {
            acc = acc.mul(x).add(&Interval::from_rational(prec, c));
        }
        acc
    }

    /// Real enclosure of `σᵢ(self)` when embedding `i` is real.
    pub fn embed_real(&self, i: usize) -> Option<Interval> {
        let root = &self.field.roots[i];
        root.real.then(|| self.embed_real_interval(&root.ball.re_interval(), self.field.precision))
    }

    pub fn embed_all(&self) -> Vec<CBall> {
        (0..self.field.degree()).map(|i| self.embed(i)).collect()
    }

    /// Principal logarithm of `σᵢ(self)`; negative real conjugates get argument π.
    pub fn log_embed(&self, i: usize) -> Result<CBall> {
        let prec = self.field.precision;
        if let Some(x) = self.embed_real(i) {
            if x.is_positive() {
                return Ok(CBall::from_real(&x.ln()?));
            }
            if x.is_negative() {
                return Ok(CBall::from_intervals(&x.neg().ln()?, &Interval::pi(prec)));
            }
            return Err(Error::PrecisionExhausted("logarithm of an enclosure of zero".into()));
        }
        self.embed(i).ln()
    }

    /// House: enclosure of `max_i |σᵢ(self)|`.
    pub fn house(&self) -> HouseValue {
        let mut acc: Option<Interval> = None;
        for i in 0..self.field.degree() {
            let a = self.embed(i).abs();
            acc = Some(match acc {
                None => a,
                Some(b) => b.max(&a),
            });
        }
        HouseValue { value: acc.unwrap() }
    }

    /// House with enclosure width at most `target`, refining precision as needed.
    pub fn house_within(&self, target: &Float) -> Result<HouseValue> {
        let mut elem = self.clone();
        loop {
            let hv = elem.house();
            if hv.value.width() <= *target {
                return Ok(hv);
            }
            let prec = elem.field.precision * 2;
            if prec > MAX_REFINE_PREC {
                return Err(Error::PrecisionExhausted(format!("house width {} above target", hv.value.width())));
            }
            elem = elem.in_field(&elem.field.with_precision(prec)?);
        }
    }

    /// Enclosure of the largest root modulus of the minimal polynomial.
    pub fn house_via_minpoly(&self) -> Result<HouseValue> {
        let mp = self.minpoly();
        let prec = self.field.precision;
        let roots = isolate_roots(&mp, prec)?;
        let mut acc: Option<Interval> = None;
        for r in roots {
            let a = r.ball.abs();
            acc = Some(match acc {
                None => a,
                Some(b) => b.max(&a),
            });
        }
        Ok(HouseValue { value: acc.unwrap() })
    }

    /// Polynomial in `x` with the coordinates as coefficients, lowest degree first.
    pub fn to_literal(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coords.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            match (i, abs == 1) {
                (0, _) => out.push_str(&abs.to_string()),
                (_, true) => out.push_str(&mono),
                (_, false) => out.push_str(&format!("{abs}*{mono}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl Serialize for NFElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_literal())
    }
}

impl Add for &NFElement {
    type Output = NFElement;
    fn add(self, rhs: &NFElement) -> NFElement {
        self.check_field(rhs);
        NFElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| Rational::from(a + b)).collect(),
        }
    }
}

impl Sub for &NFElement {
    type Output = NFElement;
    fn sub(self, rhs: &NFElement) -> NFElement {
        self.check_field(rhs);
        NFElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| Rational::from(a - b)).collect(),
        }
    }
}

impl Neg for &NFElement {
    type Output = NFElement;
    fn neg(self) -> NFElement {
        NFElement { field: self.field.clone(), coords: self.coords.iter().map(|c| Rational::from(-c)).collect() }
    }
}

impl Mul for &NFElement {
    type Output = NFElement;
    fn mul(self, rhs: &NFElement) -> NFElement {
        self.mul_ref(rhs)
    }
}

/// Basis-representation constant of the power basis.
///
/// Returns the least integer `c` with `c ≥ max_j Σ_i |(M⁻¹)_{ji}|`, where
/// `M_{ij} = σᵢ(θ^j)`. Row `j` of `M⁻¹` lists the conjugates of the
/// trace-dual basis element `e_j` (`Tr(θ^i e_j) = δ_ij`), so each row sum is
/// `Σ_i |σᵢ(e_j)|`. Hence `|coord_j(α)| = |Σ_i σᵢ(e_j) σᵢ(α)| ≤ c·house(α)`.
/// When every conjugate of `e_j` is real with one sign, the row sum equals
/// `|Tr(e_j)|` exactly, which settles enclosures straddling an integer.
pub fn basis_repr_constant(field: &Arc<NumberField>) -> Result<Integer> {
    let h = field.degree();
    let theta = NFElement::theta(field);
    let mut pw = vec![NFElement::one(field)];
    for k in 1..2 * h - 1 {
        pw.push(&pw[k - 1] * &theta);
    }
    let trace_form: RatMatrix = (0..h).map(|i| (0..h).map(|j| pw[i + j].trace()).collect()).collect();
    let inv = rational_matrix_inverse(&trace_form)?;
    let dual: Vec<NFElement> = (0..h)
        .map(|j| NFElement { field: field.clone(), coords: (0..h).map(|i| inv[i][j].clone()).collect() })
        .collect();

    let mut prec = field.precision;
    let mut f = field.clone();
    loop {
        // Per row: exact value when available, else an enclosure.
        let mut lo_max = Float::with_val(prec, 0);
        let mut hi_max = Float::with_val(prec, 0);
        for e in &dual {
            let e = e.in_field(&f);
            let embeds = e.embed_all();
            let all_real = (0..h).all(|i| f.is_real_embedding(i));
            let same_sign = all_real
                && (embeds.iter().all(|b| b.re_interval().is_positive())
                    || embeds.iter().all(|b| b.re_interval().is_negative()));
            let row = if same_sign {
                Interval::from_rational(prec, &Rational::from(e.trace().abs_ref()))
            } else {
                embeds.iter().skip(1).fold(embeds[0].abs(), |acc, b| acc.add(&b.abs()))
            };
            if *row.lo() > lo_max {
                lo_max = row.lo().clone();
            }
            if *row.hi() > hi_max {
                hi_max = row.hi().clone();
            }
        }
        let c_lo = lo_max.ceil().to_integer().unwrap();
        let c_hi = hi_max.ceil().to_integer().unwrap();
        if c_lo == c_hi {
            return Ok(c_hi.max(Integer::from(1)));
        }
        if prec >= 4 * field.precision.max(256) {
            // Conservative: the ceiling of the upper enclosure is still valid.
            return Ok(c_hi.max(Integer::from(1)));
        }
        prec *= 2;
        f = field.with_precision(prec)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn sqrt2() -> Arc<NumberField> {
        make_field(&QPoly::from_ints(&[-2, 0, 1]), 128).unwrap()
    }

    fn el(f: &Arc<NumberField>, c: &[(i64, i64)]) -> NFElement {
        NFElement::new(f, c.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn field_construction() {
        let k = sqrt2();
        assert_eq!(k.degree(), 2);
        assert!((k.embedding(0).re().to_f64() + 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(make_field(&QPoly::from_ints(&[-1, 0, 1]), 128), Err(Error::Reducible(_))));
        assert!(matches!(make_field(&QPoly::from_ints(&[4, 0, 5, 0, 1]), 128), Err(Error::Reducible(_))));
        assert!(make_field(&QPoly::from_ints(&[1, 0, 0, 0, 1]), 128).is_ok());
        let k3 = make_field(&QPoly::from_ints(&[-2, 0, 0, 1]), 128).unwrap();
        assert_eq!((0..3).filter(|&i| k3.is_real_embedding(i)).count(), 1);
    }

    #[test]
    fn norms() {
        let k = sqrt2();
        assert_eq!(el(&k, &[(1, 1), (0, 1)]).norm(), 1);
        assert_eq!(el(&k, &[(0, 1), (1, 1)]).norm(), -2);
        assert_eq!(el(&k, &[(3, 1), (1, 1)]).norm(), 7);
    }

    #[test]
    fn minimal_polynomials() {
        let k = sqrt2();
        assert_eq!(el(&k, &[(3, 1), (0, 1)]).minpoly(), QPoly::from_ints(&[-3, 1]));
        assert_eq!(el(&k, &[(0, 1), (1, 1)]).minpoly(), QPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(el(&k, &[(1, 1), (1, 1)]).minpoly(), QPoly::from_ints(&[-1, -2, 1]));
    }

    #[test]
    fn houses() {
        let k = sqrt2();
        let five = el(&k, &[(5, 1), (0, 1)]).house();
        assert!(five.value.contains(&Float::with_val(128, 5)));
        let h = el(&k, &[(1, 1), (1, 1)]).house();
        let expected = Interval::from_int(128, 2).sqrt().add(&Interval::from_int(128, 1));
        assert!(h.value.overlaps(&expected));
        let hm = el(&k, &[(1, 1), (1, 1)]).house_via_minpoly().unwrap();
        assert!(hm.value.overlaps(&h.value));
        let k3 = make_field(&QPoly::from_ints(&[-2, 0, 0, 1]), 128).unwrap();
        let t = NFElement::theta(&k3).house_via_minpoly().unwrap();
        assert!((t.upper().to_f64() - 2f64.powf(1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn clearing_and_integrality() {
        let k = sqrt2();
        assert_eq!(el(&k, &[(1, 2), (0, 1)]).denominator_clearing_integer(), 2);
        assert_eq!(NFElement::theta(&k).denominator_clearing_integer(), 1);
        let third = el(&k, &[(0, 1), (1, 3)]);
        assert_eq!(third.denominator_clearing_integer(), 9);
        assert_eq!(third.scale(&q(9, 1)).minpoly(), QPoly::from_ints(&[-18, 0, 1]));
        assert!(NFElement::theta(&k).is_integral());
        assert!(!el(&k, &[(1, 2), (0, 1)]).is_integral());
        assert!(!el(&k, &[(1, 2), (1, 2)]).is_integral());
    }

    #[test]
    fn basis_constants() {
        assert_eq!(basis_repr_constant(&sqrt2()).unwrap(), 1);
        let linear = make_field(&QPoly::from_ints(&[-1, 1]), 128).unwrap();
        assert_eq!(basis_repr_constant(&linear).unwrap(), 1);
        let golden = make_field(&QPoly::from_ints(&[-1, -1, 1]), 128).unwrap();
        assert_eq!(basis_repr_constant(&golden).unwrap(), 1);
    }

    #[test]
    fn inverse_and_log() {
        let k = sqrt2();
        let a = el(&k, &[(3, 1), (1, 1)]);
        assert_eq!(&a * &a.inv().unwrap(), NFElement::one(&k));
        let l = NFElement::theta(&k).log_embed(0).unwrap();
        assert!((l.im().to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }
}
