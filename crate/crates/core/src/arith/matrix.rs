//! Dense matrices over a prime field with deterministic Gaussian
//! elimination.
//!
//! Pivoting always selects the leftmost column with a nonzero entry and,
//! within a column, the topmost unused row. Fixed pivoting makes ranks and
//! kernel bases reproducible, which certificates rely on.

use crate::arith::field::{PrimeField, Scalar};
use std::ops::{Index, IndexMut};

/// Row-major dense matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    field: PrimeField,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, entries: vec![field.zero(); rows * cols], field }
    }

    pub fn from_rows(field: PrimeField, rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            for e in &r {
                assert_eq!(e.field(), field, "entry from a different field");
            }
            entries.extend(r);
        }
        DenseMatrix { rows: nrows, cols: ncols, entries, field }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)] * v[j];
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form; returns the pivot column of each pivot row.
    pub fn reduced_echelon(&self) -> (DenseMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            // Topmost unused row with a nonzero entry in this column.
            let Some(r) = (pivot_row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, r);
            let inv = m[(pivot_row, col)].invert().expect("pivot is nonzero");
            for j in col..m.cols {
                m[(pivot_row, j)] = m[(pivot_row, j)] * inv;
            }
            for r2 in 0..m.rows {
                if r2 != pivot_row && !m[(r2, col)].is_zero() {
                    let factor = m[(r2, col)];
                    for j in col..m.cols {
                        let sub = factor * m[(pivot_row, j)];
                        m[(r2, j)] = m[(r2, j)] - sub;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.reduced_echelon().1.len()
    }

    /// Echelonized basis of the right null space, ordered by free column.
    ///
    /// Empty exactly when the matrix is injective. For each free column j the
    /// basis vector has a 1 in position j and the negated echelon entries in
    /// the pivot positions, so the output is canonical for a fixed input.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (rref, pivots) = self.reduced_echelon();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if is_pivot[j] {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[j] = self.field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref[(row, j)];
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}
