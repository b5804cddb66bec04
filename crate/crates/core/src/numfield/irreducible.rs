//! Exact irreducibility over ℚ by recombining certified roots.
//!
//! A monic integer polynomial that factors over ℚ has a monic integer factor
//! (Gauss), whose roots are a conjugation-closed subset of the roots of the
//! polynomial. Each candidate subset is multiplied out in ball arithmetic; if
//! some coefficient enclosure contains no integer the subset is excluded,
//! otherwise the rounded candidate is confirmed or refuted by exact division.

use super::roots::IsolatedRoot;
use crate::ball::CBall;
use crate::exact::QPoly;

pub(crate) enum Verdict {
    Irreducible,
    Factor(QPoly),
    /// Some subset could not be decided at this precision.
    Undecided,
}

pub(crate) fn decide(f: &QPoly, roots: &[IsolatedRoot]) -> Verdict {
    let n = roots.len();
    if n <= 1 {
        return Verdict::Irreducible;
    }
    // Units of conjugation: real roots alone, complex roots with their conjugate.
    let mut units: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        if roots[i].real {
            units.push(vec![i]);
            continue;
        }
        let partner = (0..n).find(|&j| {
            !used[j] && !roots[j].real && roots[j].ball.overlaps(&roots[i].ball.conj())
        });
        match partner {
            Some(j) => {
                used[j] = true;
                units.push(vec![i, j]);
            }
            None => return Verdict::Undecided,
        }
    }

    let k = units.len();
    let mut undecided = false;
    // Proper factors need 1 ≤ deg ≤ n/2 (the cofactor covers the rest).
    for mask in 1u64..(1u64 << k) {
        let subset: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).flat_map(|b| units[b].clone()).collect();
        if subset.len() > n / 2 {
            continue;
        }
        match test_subset(f, roots, &subset) {
            SubsetTest::Excluded => {}
            SubsetTest::Factor(g) => return Verdict::Factor(g),
            SubsetTest::Ambiguous => undecided = true,
        }
    }
    if undecided {
        Verdict::Undecided
    } else {
        Verdict::Irreducible
    }
}

enum SubsetTest {
    Excluded,
    Factor(QPoly),
    Ambiguous,
}

fn test_subset(f: &QPoly, roots: &[IsolatedRoot], subset: &[usize]) -> SubsetTest {
    let prec = roots[0].ball.prec();
    // Coefficients of ∏ (x − r), lowest first.
    let mut coeffs = vec![CBall::one(prec)];
    for &i in subset {
        let r = &roots[i].ball;
        let mut next = vec![CBall::zero(prec); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j + 1] = next[j + 1].add(c);
            next[j] = next[j].sub(&c.mul(r));
        }
        coeffs = next;
    }
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let re = c.re_interval();
        let lo = re.lo().clone().ceil();
        let hi = re.hi().clone().floor();
        if lo > hi || !c.im_interval().contains_zero() {
            return SubsetTest::Excluded;
        }
        if lo != hi {
            return SubsetTest::Ambiguous;
        }
        ints.push(lo.to_integer().unwrap_or_default());
    }
    let g = QPoly::from_integers(&ints);
    match f.div_rem(&g) {
        Ok((_, r)) if r.is_zero() => SubsetTest::Factor(g),
        _ => SubsetTest::Ambiguous,
    }
}
