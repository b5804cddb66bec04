//! Integer kernels of integer matrices.

use rug::ops::DivRounding;
use rug::{Assign, Integer};

use super::matrix::IntMatrix;

/// A ℤ-basis of `{x ∈ ℤ^cols : A x = 0}`.
///
/// Row-reduces `[Aᵀ | I]` with unimodular integer operations until the left
/// block is in Hermite form; the identity parts of the rows whose left part
/// vanished span the kernel. Returns an empty basis for full column rank.
pub fn integer_kernel_basis(a: &IntMatrix) -> Vec<Vec<Integer>> {
    let m = a.rows();
    let n = a.cols();
    let mut w: Vec<Vec<Integer>> = (0..n)
        .map(|i| {
            let mut row: Vec<Integer> = (0..m).map(|r| a.get(r, i).clone()).collect();
            row.extend((0..n).map(|j| Integer::from(u32::from(i == j))));
            row
        })
        .collect();

    let mut pivot = 0;
    for c in 0..m {
        if pivot == n {
            break;
        }
        loop {
            // Move the smallest nonzero entry of column c into the pivot row.
            let best = (pivot..n)
                .filter(|&r| w[r][c] != 0)
                .min_by(|&x, &y| w[x][c].cmp_abs(&w[y][c]));
            let Some(best) = best else { break };
            w.swap(pivot, best);
            let mut done = true;
            for r in pivot + 1..n {
                if w[r][c] == 0 {
                    continue;
                }
                let q = round_div(&w[r][c], &w[pivot][c]);
                let (head, tail) = w.split_at_mut(r);
                sub_mul(&mut tail[0], &head[pivot], &q);
                if w[r][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if w[pivot][c] != 0 {
            pivot += 1;
        }
    }

    // Trailing rows have a zero left block; size-reduce them against each other.
    let mut basis: Vec<Vec<Integer>> = w.drain(pivot..).map(|row| row[m..].to_vec()).collect();
    reduce_pairwise(&mut basis);
    basis
}

/// Primitive integer vectors spanning the kernel over ℚ.
///
/// Uses fraction-free Gauss–Jordan elimination, so every intermediate entry
/// is a minor of `A` and no rational arithmetic is needed. The vectors form a
/// ℚ-basis of the kernel and each lies in the integer kernel lattice, but
/// together they may span a proper sublattice of it.
pub fn rational_kernel_vectors(a: &IntMatrix) -> Vec<Vec<Integer>> {
    let ncols = a.cols();
    let mut rows: Vec<Vec<Integer>> = a
        .to_rows()
        .into_iter()
        .filter_map(|mut r| {
            let g = r.iter().fold(Integer::new(), |g, x| g.gcd(x));
            if g == 0 {
                return None;
            }
            if g != 1 {
                for x in r.iter_mut() {
                    x.div_exact_mut(&g);
                }
            }
            Some(r)
        })
        .collect();
    let nrows = rows.len();

    let mut prev = Integer::from(1);
    let mut pivots: Vec<usize> = Vec::new();
    let mut is_pivot = vec![false; ncols];
    let mut tmp = Integer::new();
    for c in 0..ncols {
        let r = pivots.len();
        if r == nrows {
            break;
        }
        let best = (r..nrows)
            .filter(|&i| rows[i][c] != 0)
            .min_by_key(|&i| rows[i][c].significant_bits());
        let Some(best) = best else { continue };
        rows.swap(r, best);
        let piv = rows[r][c].clone();
        let pivot_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            for j in 0..ncols {
                if is_pivot[j] {
                    // Pivot columns are diagonal: entries are 0 or `prev`.
                    if row[j] != 0 {
                        row[j].clone_from(&piv);
                    }
                    continue;
                }
                if f == 0 {
                    if row[j] != 0 {
                        row[j] *= &piv;
                        row[j].div_exact_mut(&prev);
                    }
                    continue;
                }
                row[j] *= &piv;
                if pivot_row[j] != 0 {
                    tmp.assign(&f * &pivot_row[j]);
                    row[j] -= &tmp;
                }
                row[j].div_exact_mut(&prev);
            }
        }
        rows[r] = pivot_row;
        for j in 0..ncols {
            if is_pivot[j] && rows[r][j] != 0 {
                rows[r][j].clone_from(&piv);
            }
        }
        is_pivot[c] = true;
        pivots.push(c);
        prev = piv;
    }

    let d = prev;
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Integer::new(); ncols];
            v[f].clone_from(&d);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = Integer::from(-&rows[i][f]);
            }
            make_primitive(&mut v);
            v
        })
        .collect()
}

/// Divides a vector by the gcd of its entries.
pub fn make_primitive(v: &mut [Integer]) {
    let g = v.iter().fold(Integer::new(), |g, x| g.gcd(x));
    if g > 1 {
        for x in v.iter_mut() {
            x.div_exact_mut(&g);
        }
    }
}

/// Nearest-integer quotient `round(a / b)` for `b ≠ 0`, halves rounded up.
pub fn round_div(a: &Integer, b: &Integer) -> Integer {
    let (num, den) = if *b < 0 {
        (Integer::from(-a), Integer::from(-b))
    } else {
        (a.clone(), b.clone())
    };
    let twice = Integer::from(&num * 2) + &den;
    twice.div_floor(Integer::from(&den * 2))
}

/// `row -= q * other`.
pub(crate) fn sub_mul(row: &mut [Integer], other: &[Integer], q: &Integer) {
    if *q == 0 {
        return;
    }
    for (x, y) in row.iter_mut().zip(other) {
        if *y != 0 {
            *x -= Integer::from(q * y);
        }
    }
}

fn norm2(v: &[Integer]) -> Integer {
    super::matrix::dot(v, v)
}

/// Cheap greedy size reduction; keeps the lattice unchanged.
fn reduce_pairwise(basis: &mut [Vec<Integer>]) {
    let len = basis.len();
    for _ in 0..4 {
        let mut changed = false;
        for i in 0..len {
            for j in 0..len {
                if i == j {
                    continue;
                }
                let nj = norm2(&basis[j]);
                if nj == 0 {
                    continue;
                }
                let q = round_div(&super::matrix::dot(&basis[i], &basis[j]), &nj);
                if q != 0 {
                    let other = basis[j].clone();
                    sub_mul(&mut basis[i], &other, &q);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}
