//! Siegel's lemma over ℤ and over the power-basis order of a number field.
//!
//! Solutions come from an exact integer kernel, optionally lattice-reduced,
//! and the classical bound is checked afterwards as a certificate.

use std::cmp::Ordering;
use std::sync::Arc;

use rug::{Float, Integer};
use serde::Serialize;

use crate::ball::Interval;
use crate::error::{Error, Result};
use crate::exact::{integer_kernel_basis, lattice_reduce, rational_kernel_vectors, IntMatrix};
use crate::numfield::{basis_repr_constant, NFElement, NumberField};

/// Above this many columns the kernel is not lattice-reduced (cost grows too fast).
pub const LLL_MAX_COLS: usize = 64;
/// Coefficient radius of the exhaustive fallback search.
pub const BOX_RADIUS: i64 = 8;
const BOX_MAX_POINTS: f64 = 1e6;
const ENUM_MAX_NODES: u64 = 1_000_000;
const PREC: u32 = 128;

/// How the returned vector was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    /// Least vector of the LLL-reduced kernel basis.
    Reduced,
    /// Least primitive kernel vector from fraction-free elimination.
    Kernel,
    /// Exhaustive search over small kernel-basis coefficients.
    BoxSearch,
    /// Fincke–Pohst enumeration of the kernel lattice.
    Enumeration,
}

#[derive(Clone, Debug)]
pub struct SiegelSolution<T> {
    pub vector: Vec<T>,
    pub claimed_bound: Interval,
    /// Sup-norm of the integer vector, or the largest house in the O_K case.
    pub achieved: Interval,
    /// `achieved.upper ≤ claimed_bound.lower`, decided on certified enclosures.
    pub bound_satisfied: bool,
    pub method: SolveMethod,
}

fn sup_norm(v: &[Integer]) -> Integer {
    v.iter().map(|x| x.clone().abs()).max().unwrap_or_default()
}

/// Flips the sign so the first nonzero entry is positive.
fn normalize_sign(v: &mut [Integer]) {
    if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        for x in v.iter_mut() {
            *x = -std::mem::take(x);
        }
    }
}

/// Total order used to pick among candidates: sup-norm, then lexicographic.
fn candidate_cmp(a: &(Integer, Vec<Integer>), b: &(Integer, Vec<Integer>)) -> Ordering {
    a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))
}

struct Best(Option<(Integer, Vec<Integer>)>);

impl Best {
    fn offer(&mut self, v: &[Integer]) {
        if v.iter().all(|x| *x == 0) {
            return;
        }
        let mut v = v.to_vec();
        normalize_sign(&mut v);
        let cand = (sup_norm(&v), v);
        if self.0.as_ref().map_or(true, |b| candidate_cmp(&cand, b) == Ordering::Less) {
            self.0 = Some(cand);
        }
    }

    fn norm(&self) -> Option<&Integer> {
        self.0.as_ref().map(|b| &b.0)
    }
}

/// `(N·A)^{M/(N−M)}` with `A = max(1, max |a_jk|)`.
pub fn int_claimed_bound(rows: usize, cols: usize, abound: &Integer) -> Interval {
    let base = Interval::from_integer(PREC, &(Integer::from(cols) * abound));
    let e = Interval::from_int(PREC, rows as i64).div(&Interval::from_int(PREC, (cols - rows) as i64)).unwrap();
    base.ln().unwrap().mul(&e).exp()
}

/// Nonzero `x ∈ ℤ^N` with `Ax = 0`, certified against Siegel's bound.
pub fn siegel_int(a: &IntMatrix) -> Result<SiegelSolution<Integer>> {
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || m >= n {
        return Err(Error::ShapeError(format!("need 0 < M < N, got {m}×{n}")));
    }
    let abound = a.max_abs().max(Integer::from(1));
    let claimed = int_claimed_bound(m, n, &abound);
    let limit = claimed.lo().to_integer_round(rug::float::Round::Down).map(|(i, _)| i).unwrap_or_default();

    let (basis, mut method) = if n <= LLL_MAX_COLS {
        let k = integer_kernel_basis(a);
        (lattice_reduce(&k)?, SolveMethod::Reduced)
    } else {
        (rational_kernel_vectors(a), SolveMethod::Kernel)
    };
    if basis.is_empty() {
        // M < N forces a nontrivial kernel.
        return Err(Error::ShapeError("empty kernel".into()));
    }
    let mut best = Best(None);
    for v in &basis {
        best.offer(v);
    }

    if *best.norm().unwrap() > limit && n <= LLL_MAX_COLS {
        let before = best.norm().unwrap().clone();
        let d = basis.len();
        if (2.0 * BOX_RADIUS as f64 + 1.0).powi(d as i32) <= BOX_MAX_POINTS {
            box_search(&basis, &mut best);
            if *best.norm().unwrap() < before {
                method = SolveMethod::BoxSearch;
            }
        }
        if *best.norm().unwrap() > limit {
            let before = best.norm().unwrap().clone();
            enumerate(&basis, &limit, &mut best);
            if *best.norm().unwrap() < before {
                method = SolveMethod::Enumeration;
            }
        }
    }

    let (norm, vector) = best.0.unwrap();
    debug_assert!(a.mul_vec(&vector).iter().all(|x| *x == 0));
    let achieved = Interval::from_integer(PREC, &norm);
    let bound_satisfied = achieved.hi() <= claimed.lo();
    Ok(SiegelSolution { vector, claimed_bound: claimed, achieved, bound_satisfied, method })
}

/// Every combination with coefficients in `[-BOX_RADIUS, BOX_RADIUS]`.
fn box_search(basis: &[Vec<Integer>], best: &mut Best) {
    let d = basis.len();
    let n = basis[0].len();
    let mut coef = vec![-BOX_RADIUS; d];
    let mut v = vec![Integer::new(); n];
    loop {
        for x in v.iter_mut() {
            *x = Integer::new();
        }
        for (c, b) in coef.iter().zip(basis) {
            if *c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += Integer::from(y * *c);
                }
            }
        }
        best.offer(&v);
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            coef[i] += 1;
            if coef[i] <= BOX_RADIUS {
                break;
            }
            coef[i] = -BOX_RADIUS;
            i += 1;
        }
    }
}

/// Fincke–Pohst search of all lattice vectors with `‖v‖₂² ≤ N·limit²`.
///
/// Any vector of sup-norm at most `limit` lies in that ball. Gram–Schmidt
/// data are floating point, so the radius is padded and every candidate is
/// rebuilt and checked exactly; the search stops after `ENUM_MAX_NODES`.
fn enumerate(basis: &[Vec<Integer>], limit: &Integer, best: &mut Best) {
    let d = basis.len();
    let n = basis[0].len();
    let max_bits = basis.iter().flatten().map(|x| x.significant_bits()).max().unwrap_or(0);
    if max_bits > 500 || *limit == 0 {
        return;
    }
    let b: Vec<Vec<f64>> = basis.iter().map(|v| v.iter().map(Integer::to_f64).collect()).collect();
    let mut mu = vec![vec![0.0; d]; d];
    let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut bn = vec![0.0; d];
    for i in 0..d {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = b[i].iter().zip(&bstar[j]).map(|(x, y)| x * y).sum::<f64>() / bn[j];
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= mu[i][j] * y;
            }
        }
        bn[i] = v.iter().map(|x| x * x).sum();
        if bn[i] <= 0.0 {
            return;
        }
        bstar.push(v);
    }
    let lim = limit.to_f64();
    let r2 = n as f64 * lim * lim * (1.0 + 1e-9) + 1e-6;

    let mut coef = vec![0i64; d];
    let mut nodes = 0u64;
    let mut state = Enum { basis, mu: &mu, bn: &bn, r2, limit, nodes: &mut nodes, best, coef: &mut coef };
    state.recurse(d, 0.0);
}

struct Enum<'a> {
    basis: &'a [Vec<Integer>],
    mu: &'a [Vec<f64>],
    bn: &'a [f64],
    r2: f64,
    limit: &'a Integer,
    nodes: &'a mut u64,
    best: &'a mut Best,
    coef: &'a mut [i64],
}

impl Enum<'_> {
    fn recurse(&mut self, level: usize, partial: f64) {
        if *self.nodes >= ENUM_MAX_NODES {
            return;
        }
        *self.nodes += 1;
        if level == 0 {
            if self.coef.iter().all(|&c| c == 0) {
                return;
            }
            let n = self.basis[0].len();
            let mut v = vec![Integer::new(); n];
            for (c, b) in self.coef.iter().zip(self.basis) {
                if *c != 0 {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += Integer::from(y * *c);
                    }
                }
            }
            if sup_norm(&v) <= *self.limit {
                self.best.offer(&v);
            }
            return;
        }
        let i = level - 1;
        let centre: f64 = -(level..self.coef.len()).map(|j| self.coef[j] as f64 * self.mu[j][i]).sum::<f64>();
        let room = (self.r2 - partial) / self.bn[i];
        if room < 0.0 {
            return;
        }
        let w = room.sqrt();
        let lo = (centre - w).ceil() as i64;
        let hi = (centre + w).floor() as i64;
        for x in lo..=hi {
            let y = x as f64 - centre;
            self.coef[i] = x;
            self.recurse(i, partial + y * y * self.bn[i]);
        }
        self.coef[i] = 0;
    }
}

/// Integer system whose kernel is the coordinate form of the kernel of `B` over K.
///
/// Block `(k, l)` is the multiplication matrix of `B[k][l]` in the power basis.
pub fn flatten_ok_system(b: &[Vec<NFElement>]) -> Result<IntMatrix> {
    let p = b.len();
    let q = b.first().map_or(0, Vec::len);
    if p == 0 || q == 0 || b.iter().any(|r| r.len() != q) {
        return Err(Error::ShapeError("matrix must be a nonempty rectangle".into()));
    }
    let h = b[0][0].field().degree();
    let mut out = IntMatrix::zeros(h * p, h * q);
    for (k, row) in b.iter().enumerate() {
        for (l, e) in row.iter().enumerate() {
            if !e.has_integer_coords() {
                return Err(Error::NotIntegral(format!("entry ({k}, {l}) = {e}")));
            }
            let mm = e.multiplication_matrix();
            for (i, mrow) in mm.iter().enumerate() {
                for (j, x) in mrow.iter().enumerate() {
                    out.set(h * k + i, h * l + j, x.numer().clone());
                }
            }
        }
    }
    Ok(out)
}

/// Claimed bound `c₁(1 + (c₁·q·A)^{p/(q−p)})` for the O_K lemma.
pub fn ok_claimed_bound(c1: &Integer, p: usize, q: usize, ahouse: &Float) -> Interval {
    let c = Interval::from_integer(PREC, c1);
    let a = Interval::new(Float::with_val(PREC, ahouse), Float::with_val(PREC, ahouse));
    let base = c.mul(&Interval::from_int(PREC, q as i64)).mul(&a);
    let e = Interval::from_int(PREC, p as i64).div(&Interval::from_int(PREC, (q - p) as i64)).unwrap();
    let pw = base.ln().unwrap().mul(&e).exp();
    c.mul(&pw.add(&Interval::from_int(PREC, 1)))
}

/// Nonzero `ξ ∈ ℤ[θ]^q` with `Bξ = 0`, certified against the O_K bound.
///
/// `Ahouse = max(1, max house(B[k][l]))`.
pub fn siegel_ok(b: &[Vec<NFElement>]) -> Result<SiegelSolution<NFElement>> {
    let flat = flatten_ok_system(b)?;
    let (p, q) = (b.len(), b[0].len());
    if p >= q {
        return Err(Error::ShapeError(format!("need 0 < p < q, got {p}×{q}")));
    }
    let field: &Arc<NumberField> = b[0][0].field();
    let h = field.degree();
    let mut ahouse = Float::with_val(PREC, 1);
    for e in b.iter().flatten() {
        let hv = e.house();
        if *hv.upper() > ahouse {
            ahouse = Float::with_val(PREC, hv.upper());
        }
    }
    let c1 = basis_repr_constant(field)?;
    let claimed = ok_claimed_bound(&c1, p, q, &ahouse);

    let sol = siegel_int(&flat)?;
    let vector: Vec<NFElement> = sol
        .vector
        .chunks(h)
        .map(|c| NFElement::new(field, c.iter().map(|x| x.clone().into()).collect()))
        .collect::<Result<_>>()?;
    let mut achieved: Option<Interval> = None;
    for e in &vector {
        let hv = e.house().value;
        achieved = Some(match achieved {
            None => hv,
            Some(a) => a.max(&hv),
        });
    }
    let achieved = achieved.unwrap();
    let bound_satisfied = achieved.hi() <= claimed.lo();
    Ok(SiegelSolution { vector, claimed_bound: claimed, achieved, bound_satisfied, method: sol.method })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QPoly;
    use crate::numfield::{make_field, parse_element};

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn two_three() {
        let s = siegel_int(&m(&[&[2, 3]])).unwrap();
        assert_eq!(s.vector, ints(&[3, -2]));
        assert!(s.claimed_bound.contains(&Float::with_val(PREC, 6)));
        assert!(s.bound_satisfied);
    }

    #[test]
    fn all_ones() {
        let s = siegel_int(&m(&[&[1, 1, 1]])).unwrap();
        assert_eq!(sup_norm(&s.vector), 1);
        assert!(s.claimed_bound.contains(&Float::with_val(PREC, 3).sqrt()));
        assert!(s.bound_satisfied);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(siegel_int(&m(&[&[1, 0], &[0, 1]])), Err(Error::ShapeError(_))));
    }

    #[test]
    fn enumeration_meets_tight_bound() {
        // Bound (12·10)^{1/11} < 2 forces a {−1, 0, 1} solution.
        let a = m(&[&[10, 9, 7, 3, 8, 2, 5, 6, 4, 1, 10, 3]]);
        let s = siegel_int(&a).unwrap();
        assert!(s.bound_satisfied, "{:?}", s.vector);
        assert_eq!(sup_norm(&s.vector), 1);
        assert!(a.mul_vec(&s.vector).iter().all(|x| *x == 0));
    }

    fn sqrt2() -> Arc<NumberField> {
        make_field(&QPoly::from_ints(&[-2, 0, 1]), 128).unwrap()
    }

    #[test]
    fn flattening() {
        let k = sqrt2();
        let one = NFElement::one(&k);
        let t = NFElement::theta(&k);
        assert_eq!(flatten_ok_system(&[vec![one.clone()]]).unwrap(), IntMatrix::identity(2));
        assert_eq!(flatten_ok_system(&[vec![t.clone()]]).unwrap(), m(&[&[0, 2], &[1, 0]]));
        assert_eq!(flatten_ok_system(&[vec![one, t]]).unwrap(), m(&[&[1, 0, 0, 2], &[0, 1, 1, 0]]));
        let half = parse_element(&k, "1/2").unwrap();
        assert!(matches!(flatten_ok_system(&[vec![half]]), Err(Error::NotIntegral(_))));
    }

    #[test]
    fn ok_solutions() {
        let k = sqrt2();
        let s = siegel_ok(&[vec![NFElement::one(&k), NFElement::theta(&k)]]).unwrap();
        let lhs = &s.vector[0] + &(&NFElement::theta(&k) * &s.vector[1]);
        assert!(lhs.is_zero());
        assert_eq!(s.vector[1], -&NFElement::one(&k));
        assert_eq!(s.vector[0], NFElement::theta(&k));

        let q = NumberField::rationals(128);
        let s = siegel_ok(&[vec![NFElement::from_int(&q, 2), NFElement::from_int(&q, -1)]]).unwrap();
        assert_eq!(s.vector[0].as_rational().unwrap(), 1);
        assert_eq!(s.vector[1].as_rational().unwrap(), 2);
        assert!(s.bound_satisfied);

        let s = siegel_ok(&[vec![NFElement::zero(&q), NFElement::zero(&q)]]).unwrap();
        assert!(s.vector.iter().any(|e| !e.is_zero()));
        assert!(s.bound_satisfied);
    }
}
