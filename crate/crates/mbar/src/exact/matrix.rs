//! Sparse matrices over the rationals with exact rank and linear solving.
//!
//! Entries are stored sparsely (absent means zero). Elimination is plain
//! Gaussian elimination in rational arithmetic; the matrices this crate
//! produces (21x56 and 6x126 at the largest) are far too small for
//! fraction-free pivoting to matter, and exactness is automatic.

use super::{ExactError, Rational};
use num::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

/// Result of solving `m x = b`: one particular solution together with a
/// basis of the null space, or a witness that the system is inconsistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution {
        particular: Vec<Rational>,
        null_basis: Vec<Vec<Rational>>,
    },
    Inconsistent,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, num::one()).unwrap();
        }
        m
    }

    /// Builds a matrix from dense rows. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(ExactError::DimensionMismatch(format!(
                    "row {i} has length {} instead of {c}",
                    row.len()
                )));
            }
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone())?;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sets an entry; zeros are dropped so equality stays structural.
    pub fn set(&mut self, i: usize, j: usize, x: Rational) -> Result<(), ExactError> {
        if i >= self.rows || j >= self.cols {
            return Err(ExactError::IndexOutOfBounds(i, j, self.rows, self.cols));
        }
        if x.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), x);
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for (&(i, j), x) in &self.entries {
            t.entries.insert((j, i), x.clone());
        }
        t
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut d = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (&(i, j), x) in &self.entries {
            d[i][j] = x.clone();
        }
        d
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::DimensionMismatch(format!(
                "vector length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (&(i, j), x) in &self.entries {
            out[i] += x * &v[j];
        }
        Ok(out)
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut d = self.to_dense();
        let (rank, _) = row_reduce(&mut d);
        rank
    }

    /// Exact determinant. Panics unless the matrix is square.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut d = self.to_dense();
        let mut det = Rational::from(num::BigInt::from(1));
        for col in 0..n {
            let pivot = (col..n).find(|&r| !d[r][col].is_zero());
            let Some(p) = pivot else {
                return Rational::zero();
            };
            if p != col {
                d.swap(p, col);
                det = -det;
            }
            let pv = d[col][col].clone();
            det *= &pv;
            for r in col + 1..n {
                if d[r][col].is_zero() {
                    continue;
                }
                let f = &d[r][col] / &pv;
                for c in col..n {
                    let sub = &f * &d[col][c];
                    d[r][c] -= sub;
                }
            }
        }
        det
    }

    /// Exact inverse, if the matrix is square and invertible.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.to_dense();
        for (i, row) in aug.iter_mut().enumerate() {
            row.extend((0..n).map(|j| {
                if i == j {
                    Rational::from(num::BigInt::from(1))
                } else {
                    Rational::zero()
                }
            }));
        }
        let (rank, _) = row_reduce(&mut aug);
        if rank != n {
            return None;
        }
        let mut inv = RationalMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug[i][n + j].clone()).unwrap();
            }
        }
        Some(inv)
    }

    /// Solves `m x = b` exactly, returning a particular solution and a
    /// null-space basis, or `Inconsistent`.
    pub fn solve(&self, b: &[Rational]) -> Result<SolveOutcome, ExactError> {
        if b.len() != self.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "right-hand side length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = self.to_dense();
        for (i, row) in aug.iter_mut().enumerate() {
            row.push(b[i].clone());
        }
        let (_, pivots) = row_reduce(&mut aug);
        // A pivot in the augmented column means no solution.
        if pivots.iter().any(|&c| c == self.cols) {
            return Ok(SolveOutcome::Inconsistent);
        }
        let pivot_of_col: BTreeMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let mut particular = vec![Rational::zero(); self.cols];
        for (&c, &r) in &pivot_of_col {
            particular[c] = aug[r][self.cols].clone();
        }
        let mut null_basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col.contains_key(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::from(num::BigInt::from(1));
            for (&c, &r) in &pivot_of_col {
                v[c] = -aug[r][free].clone();
            }
            null_basis.push(v);
        }
        Ok(SolveOutcome::Solution {
            particular,
            null_basis,
        })
    }
}

/// In-place reduction to reduced row echelon form.
/// Returns the rank and the pivot column of each pivot row.
fn row_reduce(m: &mut [Vec<Rational>]) -> (usize, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let pv = m[row][col].clone();
        for c in col..cols {
            m[row][c] = &m[row][c] / &pv;
        }
        for r in 0..rows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..cols {
                let sub = &f * &m[row][c];
                m[r][c] -= sub;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (row, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn rank_of_empty_matrix_is_zero() {
        assert_eq!(RationalMatrix::zero(0, 0).rank(), 0);
    }

    #[test]
    fn rank_of_identity() {
        assert_eq!(RationalMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_of_proportional_rows() {
        let m = RationalMatrix::from_rows(&[
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_identity_system() {
        let m = RationalMatrix::identity(2);
        let out = m.solve(&[rat_int(1), rat(1, 2)]).unwrap();
        match out {
            SolveOutcome::Solution {
                particular,
                null_basis,
            } => {
                assert_eq!(particular, vec![rat_int(1), rat(1, 2)]);
                assert!(null_basis.is_empty());
            }
            SolveOutcome::Inconsistent => panic!("inconsistent"),
        }
    }

    #[test]
    fn solve_underdetermined_system() {
        let m = RationalMatrix::from_rows(&[vec![rat_int(1), rat_int(1)]]).unwrap();
        match m.solve(&[rat_int(3)]).unwrap() {
            SolveOutcome::Solution {
                particular,
                null_basis,
            } => {
                assert_eq!(particular, vec![rat_int(3), rat_int(0)]);
                assert_eq!(null_basis, vec![vec![rat_int(-1), rat_int(1)]]);
            }
            SolveOutcome::Inconsistent => panic!("inconsistent"),
        }
    }

    #[test]
    fn solve_inconsistent_system() {
        let m =
            RationalMatrix::from_rows(&[vec![rat_int(1)], vec![rat_int(2)]]).unwrap();
        assert_eq!(
            m.solve(&[rat_int(1), rat_int(1)]).unwrap(),
            SolveOutcome::Inconsistent
        );
    }

    #[test]
    fn det_and_inverse() {
        let m = RationalMatrix::from_rows(&[
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ])
        .unwrap();
        assert_eq!(m.det(), rat_int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(inv.get(0, 0), rat_int(1));
        assert_eq!(inv.get(0, 1), rat_int(-1));
    }
}
