//! Integer and rational matrices.

use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Integer>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Integer>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeError(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![Integer::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Integer::from(1);
        }
        m
    }

    /// Builds from nested rows; all rows must have the same length.
    pub fn from_rows<T: Into<Integer> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeError("ragged rows".into()));
        }
        let entries = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        IntMatrix::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Integer] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Integer {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Integer) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Integer] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Integer>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Largest absolute entry (zero for an empty matrix).
    pub fn max_abs(&self) -> Integer {
        self.entries.iter().map(|e| Integer::from(e.abs_ref())).max().unwrap_or_default()
    }

    pub fn mul_vec(&self, x: &[Integer]) -> Vec<Integer> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        (0..self.rows).map(|r| dot(self.row(r), x)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// Rank over ℚ.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Rational>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(Rational::from).collect())
            .collect();
        row_echelon(rows).1.len()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(Integer::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    let mut acc = Integer::new();
    for (x, y) in a.iter().zip(b) {
        if *x != 0 && *y != 0 {
            acc += x * y;
        }
    }
    acc
}

/// Square matrix of rationals, stored as rows.
pub type RatMatrix = Vec<Vec<Rational>>;

/// Reduced row echelon form over ℚ; returns the reduced rows and pivot columns.
pub fn row_echelon(mut m: RatMatrix) -> (RatMatrix, Vec<usize>) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::from(m[r][c].recip_ref());
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c].clone();
                let (head, tail) = m.split_at_mut(i.max(r));
                let (pivot_row, row) =
                    if i < r { (&tail[0], &mut head[i]) } else { (&head[r], &mut tail[0]) };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    if *y != 0 {
                        *x -= Rational::from(&f * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Exact inverse of a square rational matrix.
pub fn rational_matrix_inverse(m: &RatMatrix) -> Result<RatMatrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeError("inverse needs a square matrix".into()));
    }
    let augmented: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Rational::from(u32::from(i == j))));
            r
        })
        .collect();
    let (reduced, pivots) = row_echelon(augmented);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok(reduced.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Exact determinant of a square rational matrix.
pub fn rational_det(m: &RatMatrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::from(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i][c] != 0) else {
            return Rational::new();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = Rational::from(a[c][c].recip_ref());
        for i in c + 1..n {
            if a[i][c] == 0 {
                continue;
            }
            let f = Rational::from(&a[i][c] * &inv);
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= Rational::from(&f * y);
            }
        }
    }
    det
}

pub fn rational_mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Rational::new();
                    for k in 0..inner {
                        acc += Rational::from(&row[k] * &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect()
    }

    fn identity(n: usize) -> RatMatrix {
        (0..n).map(|i| (0..n).map(|j| Rational::from(u32::from(i == j))).collect()).collect()
    }

    #[test]
    fn inverse_of_identity() {
        assert_eq!(rational_matrix_inverse(&identity(3)).unwrap(), identity(3));
    }

    #[test]
    fn inverse_of_diagonal() {
        let inv = rational_matrix_inverse(&rm(&[&[2, 0], &[0, 4]])).unwrap();
        assert_eq!(inv[0][0], Rational::from((1, 2)));
        assert_eq!(inv[1][1], Rational::from((1, 4)));
        assert_eq!(inv[0][1], 0);
    }

    #[test]
    fn inverse_of_hadamard() {
        let m = rm(&[&[1, 1], &[1, -1]]);
        let inv = rational_matrix_inverse(&m).unwrap();
        let half = Rational::from((1, 2));
        assert_eq!(inv, vec![vec![half.clone(), half.clone()], vec![half.clone(), -half]]);
        assert_eq!(rational_mat_mul(&m, &inv), identity(2));
    }

    #[test]
    fn singular_is_reported() {
        assert_eq!(rational_matrix_inverse(&rm(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    #[test]
    fn determinant() {
        assert_eq!(rational_det(&rm(&[&[0, 2], &[1, 0]])), -2);
        assert_eq!(rational_det(&rm(&[&[3, 2], &[1, 3]])), 7);
    }

    #[test]
    fn shape_checked() {
        assert!(IntMatrix::new(2, 2, vec![Integer::new(); 3]).is_err());
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.transpose().get(2, 1), &6);
    }
}
