//! Exact integral LLL reduction.

use rug::Integer;

use super::kernel::{round_div, sub_mul};
use super::matrix::dot;
use crate::error::{Error, Result};

/// Lovász parameter `δ = DELTA_NUM / DELTA_DEN`.
const DELTA_NUM: u32 = 99;
const DELTA_DEN: u32 = 100;

/// LLL-reduces a basis with all Gram–Schmidt data kept as exact integers.
///
/// The subdeterminants `d_i` and scaled coefficients `λ_{k,j} = d_j μ_{k,j}`
/// stay integral, so no rounding ever enters. The output spans the same
/// lattice, is size-reduced (`|μ_{k,j}| ≤ 1/2`) and satisfies the Lovász
/// condition with `δ = 0.99`.
pub fn lattice_reduce(basis: &[Vec<Integer>]) -> Result<Vec<Vec<Integer>>> {
    let n = basis.len();
    let mut b: Vec<Vec<Integer>> = basis.to_vec();
    if n == 0 {
        return Ok(b);
    }
    let dim = b[0].len();
    if b.iter().any(|v| v.len() != dim) {
        return Err(Error::ShapeError("basis vectors differ in length".into()));
    }

    // d[i + 1] is the Gram determinant of the first i + 1 vectors; d[0] = 1.
    let mut d = vec![Integer::new(); n + 1];
    d[0] = Integer::from(1);
    let mut lam = vec![vec![Integer::new(); n]; n];
    let mut kmax = 0;
    d[1] = dot(&b[0], &b[0]);
    if d[1] == 0 {
        return Err(Error::DependentInput);
    }
    let mut k = 1;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (Integer::from(&d[i + 1] * &u) - Integer::from(&lam[k][i] * &lam[j][i])) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u == 0 {
                        return Err(Error::DependentInput);
                    }
                    d[k + 1] = u;
                }
            }
        }
        reduce(k, k - 1, &mut b, &mut lam, &d);
        let lhs = Integer::from(&d[k + 1] * &d[k - 1]) * DELTA_DEN;
        let rhs = Integer::from(d[k].square_ref()) * DELTA_NUM
            - Integer::from(lam[k][k - 1].square_ref()) * DELTA_DEN;
        if lhs < rhs {
            swap(k, kmax, &mut b, &mut lam, &mut d);
            k = k.saturating_sub(1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                reduce(k, l, &mut b, &mut lam, &d);
            }
            k += 1;
        }
    }
    Ok(b)
}

fn reduce(k: usize, l: usize, b: &mut [Vec<Integer>], lam: &mut [Vec<Integer>], d: &[Integer]) {
    let twice = Integer::from(lam[k][l].abs_ref()) * 2;
    if twice <= d[l + 1] {
        return;
    }
    let q = round_div(&lam[k][l], &d[l + 1]);
    let (head, tail) = b.split_at_mut(k);
    sub_mul(&mut tail[0], &head[l], &q);
    lam[k][l] -= Integer::from(&q * &d[l + 1]);
    for i in 0..l {
        let t = Integer::from(&q * &lam[l][i]);
        lam[k][i] -= t;
    }
}

fn swap(k: usize, kmax: usize, b: &mut [Vec<Integer>], lam: &mut [Vec<Integer>], d: &mut [Integer]) {
    b.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = std::mem::take(&mut lam[k][j]);
        lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
    }
    let l = lam[k][k - 1].clone();
    let big_b = (Integer::from(&d[k - 1] * &d[k + 1]) + Integer::from(l.square_ref())) / &d[k];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (Integer::from(&d[k + 1] * &lam[i][k - 1]) - Integer::from(&l * &t)) / &d[k];
        lam[i][k - 1] = (Integer::from(&big_b * &t) + Integer::from(&l * &lam[i][k])) / &d[k + 1];
    }
    d[k] = big_b;
}
