use std::sync::Arc;

use gs_core::ball::{CBall, Interval};
use gs_core::exact::{lattice_reduce, IntMatrix, QPoly};
use gs_core::numfield::{basis_repr_constant, make_field, NFElement, NumberField};
use gs_core::siegel::{int_claimed_bound, siegel_int};
use proptest::prelude::*;
use rug::{Float, Integer, Rational};

const PREC: u32 = 128;

fn field(cubic: bool) -> Arc<NumberField> {
    let poly = if cubic { QPoly::from_ints(&[-2, 0, 0, 1]) } else { QPoly::from_ints(&[-2, 0, 1]) };
    make_field(&poly, PREC).unwrap()
}

fn element(f: &Arc<NumberField>, coords: &[(i64, i64)]) -> NFElement {
    let c = coords.iter().take(f.degree()).map(|&(n, d)| Rational::from((n, d))).collect();
    NFElement::new(f, c).unwrap()
}

fn coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-50i64..=50, 1i64..=9), 3)
}

fn int_coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-30i64..=30).prop_map(|n| (n, 1)), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_multiplicative(cubic: bool, a in coords(), b in coords()) {
        let f = field(cubic);
        let (x, y) = (element(&f, &a), element(&f, &b));
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn nonzero_integral_norm_at_least_one(cubic: bool, a in int_coords()) {
        let f = field(cubic);
        let x = element(&f, &a);
        prop_assume!(!x.is_zero());
        let n = x.norm();
        prop_assert_eq!(n.denom(), &Integer::from(1));
        prop_assert!(n.abs() >= 1);
    }

    #[test]
    fn house_agrees_with_minpoly_roots(cubic: bool, a in coords()) {
        let x = element(&field(cubic), &a);
        let (h, m) = (x.house(), x.house_via_minpoly().unwrap());
        prop_assert!(h.lower() <= m.upper() && m.lower() <= h.upper());
    }

    #[test]
    fn house_sub_additive_and_sub_multiplicative(cubic: bool, a in coords(), b in coords()) {
        let f = field(cubic);
        let (x, y) = (element(&f, &a), element(&f, &b));
        let (hx, hy) = (x.house(), y.house());
        prop_assert!(*(&x + &y).house().lower() <= Float::with_val(PREC, hx.upper() + hy.upper()));
        prop_assert!(*(&x * &y).house().lower() <= Float::with_val(PREC, hx.upper() * hy.upper()));
    }

    #[test]
    fn inverse_round_trips(cubic: bool, a in coords()) {
        let x = element(&field(cubic), &a);
        prop_assume!(!x.is_zero());
        let y = x.inv().unwrap();
        prop_assert!((&x * &y) == NFElement::one(x.field()));
    }

    #[test]
    fn clearing_makes_integral(cubic: bool, a in coords()) {
        let x = element(&field(cubic), &a);
        let d = x.denominator_clearing_integer();
        prop_assert!(d > 0);
        prop_assert!(x.scale_int(&d).is_integral());
    }

    #[test]
    fn coordinates_bounded_by_house(cubic: bool, a in int_coords()) {
        let f = field(cubic);
        let x = element(&f, &a);
        let c = Float::with_val(PREC, &basis_repr_constant(&f).unwrap());
        let bound = Float::with_val(PREC, &c * x.house().upper());
        for k in x.coords() {
            prop_assert!(Float::with_val(PREC, k.clone().abs()) <= bound);
        }
    }

    #[test]
    fn siegel_integer_solutions(
        (m, n, entries) in (2usize..=8).prop_flat_map(|n| (1..n, Just(n))).prop_flat_map(|(m, n)| {
            (Just(m), Just(n), prop::collection::vec(-10i64..=10, m * n))
        })
    ) {
        let a = IntMatrix::new(m, n, entries.into_iter().map(Integer::from).collect()).unwrap();
        let sol = siegel_int(&a).unwrap();
        prop_assert!(sol.vector.iter().any(|x| *x != 0));
        prop_assert!(a.mul_vec(&sol.vector).iter().all(|x| *x == 0));
        let abound = a.max_abs().max(Integer::from(1));
        let bound = int_claimed_bound(m, n, &abound);
        prop_assert!(sol.achieved.hi() <= bound.hi());
    }

    #[test]
    fn lattice_reduction_preserves_determinant(entries in prop::collection::vec(-20i64..=20, 9)) {
        let rows: Vec<Vec<Integer>> = entries.chunks(3).map(|r| r.iter().map(|&x| Integer::from(x)).collect()).collect();
        let det = |b: &[Vec<Integer>]| -> Integer {
            let q: Vec<Vec<Rational>> = b.iter().map(|r| r.iter().map(Rational::from).collect()).collect();
            let d = gs_core::exact::matrix::rational_det(&q);
            d.numer().clone()
        };
        let d0 = det(&rows);
        prop_assume!(d0 != 0);
        let red = lattice_reduce(&rows).unwrap();
        prop_assert_eq!(det(&red).abs(), d0.abs());
    }

    #[test]
    fn interval_ops_contain_point_results(x in -1e6f64..1e6, y in -1e6f64..1e6, r in 0.0f64..1.0) {
        let ball = |v: f64| Interval::new(Float::with_val(PREC, v - r), Float::with_val(PREC, v + r));
        let (ix, iy) = (ball(x), ball(y));
        let (fx, fy) = (Float::with_val(PREC, x), Float::with_val(PREC, y));
        prop_assert!(ix.add(&iy).contains(&Float::with_val(PREC, &fx + &fy)));
        prop_assert!(ix.mul(&iy).contains(&Float::with_val(PREC, &fx * &fy)));
        prop_assert!(ix.sub(&iy).contains(&Float::with_val(PREC, &fx - &fy)));
        let small = ball(x / 1e6);
        prop_assert!(small.exp().contains(&Float::with_val(PREC, x / 1e6).exp()));
    }

    #[test]
    fn complex_ball_ops_contain_point_results(a in -100f64..100.0, b in -100f64..100.0, c in -100f64..100.0, d in -100f64..100.0) {
        let p = |re: f64, im: f64| CBall::with_rad(Float::with_val(PREC, re), Float::with_val(PREC, im), Float::with_val(PREC, 1e-3));
        let (u, v) = (p(a, b), p(c, d));
        let f = |v: f64| Float::with_val(PREC, v);
        let re = Float::with_val(PREC, &f(a) * &f(c)) - Float::with_val(PREC, &f(b) * &f(d));
        let im = Float::with_val(PREC, &f(a) * &f(d)) + Float::with_val(PREC, &f(b) * &f(c));
        prop_assert!(u.mul(&v).contains_ball(&CBall::point(re, im)));
        prop_assert!(u.add(&v).contains_ball(&CBall::point(f(a + c), f(b + d))));
        prop_assume!(c.abs() + d.abs() > 1.0);
        let q = u.div(&v).unwrap();
        prop_assert!(q.mul(&v).overlaps(&u));
    }
}
