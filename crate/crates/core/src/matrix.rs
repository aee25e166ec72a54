//! Square non-negative integer matrices with exact arithmetic.
//!
//! Indices are 0-based here. Pair-flavor matrices are indexed by
//! [`Letter`](crate::Letter) index, permutation-flavor ones by `position - 1`.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VisitationMatrix {
    n: usize,
    data: Vec<i64>,
}

impl fmt::Debug for VisitationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in self.rows() {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

impl VisitationMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = VisitationMatrix { n, data: vec![0; n * n] };
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        VisitationMatrix { n, data: vec![0; n * n] }
    }

    /// Identity plus a single 1 at `(row, col)`.
    pub fn elementary(n: usize, row: usize, col: usize) -> Self {
        let mut m = Self::identity(n);
        m.data[row * n + col] += 1;
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::MalformedMatrix("matrix has no rows".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::MalformedMatrix(format!("row {} has {} entries, expected {n}", i + 1, r.len())));
            }
            if let Some(v) = r.iter().find(|&&v| v < 0) {
                return Err(Error::MalformedMatrix(format!("negative entry {v} in row {}", i + 1)));
            }
            data.extend(r);
        }
        Ok(VisitationMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.data.chunks(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.rows().map(<[i64]>::to_vec).collect()
    }

    pub fn max_entry(&self) -> i64 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    pub fn entry_sum(&self) -> i64 {
        self.data.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Product `self * rhs`, or `None` on overflow.
    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.n, rhs.n, "multiplying matrices of different sizes");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b != 0 {
                        let v = out.data[i * n + j].checked_add(a.checked_mul(b)?)?;
                        out.data[i * n + j] = v;
                    }
                }
            }
        }
        Some(out)
    }

    pub fn pow(&self, p: usize) -> Self {
        let mut out = Self::identity(self.n);
        for _ in 0..p {
            out = &out * self;
        }
        out
    }

    /// Ordered product of `factors`; the identity when empty.
    pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a VisitationMatrix>) -> Self {
        factors.into_iter().fold(Self::identity(n), |acc, m| &acc * m)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        let n = self.n;
        let mut a: Vec<Vec<i128>> = self.rows().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }

    /// Off-diagonal entries `(i, j, value)` that are non-zero, in row-major order.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n).filter_map(move |j| {
                let v = self.get(i, j);
                (i != j && v != 0).then_some((i, j, v))
            })
        })
    }
}

impl Mul for &VisitationMatrix {
    type Output = VisitationMatrix;

    fn mul(self, rhs: &VisitationMatrix) -> VisitationMatrix {
        self.checked_mul(rhs).expect("visitation matrix entry overflowed i64")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(VisitationMatrix::identity(4).determinant(), 1);
        let swap = VisitationMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(swap.determinant(), -1);
        let m = VisitationMatrix::from_rows(vec![vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]).unwrap();
        // 2(12-1) - 1(4-0) = 18
        assert_eq!(m.determinant(), 18);
        let singular = VisitationMatrix::from_rows(vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(singular.determinant(), 0);
        let needs_pivot = VisitationMatrix::from_rows(vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(needs_pivot.determinant(), 1);
    }

    #[test]
    fn elementary_products_commute_within_a_row() {
        let a = VisitationMatrix::elementary(4, 0, 2);
        let b = VisitationMatrix::elementary(4, 0, 3);
        assert_eq!(&a * &b, &b * &a);
        let ab = &a * &b;
        assert_eq!(ab.row(0), &[1, 0, 1, 1]);
        assert_eq!(ab.determinant(), 1);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(VisitationMatrix::from_rows(vec![vec![1, 0], vec![0]]).is_err());
        assert!(VisitationMatrix::from_rows(vec![vec![1, -1], vec![0, 1]]).is_err());
        assert!(VisitationMatrix::from_rows(vec![]).is_err());
    }

    #[test]
    fn overflow_is_detected() {
        let big = VisitationMatrix::from_rows(vec![vec![i64::MAX / 2, 1], vec![1, 1]]).unwrap();
        assert!(big.checked_mul(&big).is_none());
    }
}
