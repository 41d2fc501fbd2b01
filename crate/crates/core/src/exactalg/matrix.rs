//! Dense matrices over the rationals with exact row reduction.
//!
//! Row reduction always picks the topmost nonzero entry of the leftmost
//! remaining column as pivot, so reduced forms, kernel bases and canonical
//! solutions are reproducible.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};

use super::rational::Rational;
use super::univariate::QPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diag(values: &[Rational]) -> Self {
        let mut m = QMatrix::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>], nrows: usize) -> Self {
        let mut m = QMatrix::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        self.add(&other.scale(&-Rational::one()))
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &QMatrix) -> QMatrix {
        (self * other).sub(&(other * self))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Flattened row-major entries.
    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols);
        QMatrix { rows, cols, data }
    }

    /// Reduced row echelon form with the operation log needed to replay the
    /// same reduction on right-hand sides.
    pub fn row_reduce(&self) -> RowReduction {
        let mut rows: Vec<Vec<Rational>> = self.to_rows();
        let mut ops = Vec::new();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            if p != r {
                rows.swap(p, r);
                ops.push(RowOp::Swap(p, r));
            }
            let inv = rows[r][col].recip();
            if !inv.is_one() {
                for v in rows[r].iter_mut().skip(col) {
                    if !v.is_zero() {
                        *v *= &inv;
                    }
                }
                ops.push(RowOp::Scale(r, inv));
            }
            let support: Vec<usize> = (col..self.cols).filter(|&j| !rows[r][j].is_zero()).collect();
            let pivot_row = std::mem::take(&mut rows[r]);
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for &j in &support {
                    row[j] -= &factor * &pivot_row[j];
                }
                ops.push(RowOp::AddMultiple { target: i, source: r, factor: -factor });
            }
            rows[r] = pivot_row;
            pivots.push(col);
            r += 1;
        }
        let rref = QMatrix::from_flat(self.rows, self.cols, rows.into_iter().flatten().collect());
        RowReduction { rref, pivots, ops }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().pivots.len()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        self.row_reduce().kernel_basis()
    }

    /// Canonical solution of `self * x = b` (free variables zero), or `None`.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        self.row_reduce().solve(b)
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det *= &pivot;
            for i in col + 1..n {
                if a[i][col].is_zero() {
                    continue;
                }
                let factor = &a[i][col] / &pivot;
                for j in col..n {
                    let delta = &factor * &a[col][j];
                    a[i][j] -= delta;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let red = aug.row_reduce();
        if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = red.rref[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Monic characteristic polynomial `det(sI - A)` (Faddeev-LeVerrier).
    pub fn char_poly(&self) -> Result<QPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = QMatrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            m = next;
            let am = self * &m;
            coeffs[n - k] = -am.trace() / Rational::from_integer((k as i64).into());
        }
        Ok(QPoly::new(coeffs))
    }

    pub fn pow(&self, e: u32) -> QMatrix {
        let mut out = QMatrix::identity(self.rows);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
enum RowOp {
    Swap(usize, usize),
    Scale(usize, Rational),
    AddMultiple { target: usize, source: usize, factor: Rational },
}

/// Result of [`QMatrix::row_reduce`].
#[derive(Clone, Debug)]
pub struct RowReduction {
    pub rref: QMatrix,
    pub pivots: Vec<usize>,
    ops: Vec<RowOp>,
}

impl RowReduction {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Applies the recorded row operations to a right-hand side.
    pub fn transform(&self, b: &[Rational]) -> Vec<Rational> {
        assert_eq!(b.len(), self.rref.rows, "dimension mismatch");
        let mut v = b.to_vec();
        for op in &self.ops {
            match op {
                RowOp::Swap(a, b) => v.swap(*a, *b),
                RowOp::Scale(r, c) => {
                    if !v[*r].is_zero() {
                        v[*r] *= c;
                    }
                }
                RowOp::AddMultiple { target, source, factor } => {
                    if !v[*source].is_zero() {
                        let delta = factor * &v[*source];
                        v[*target] += delta;
                    }
                }
            }
        }
        v
    }

    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        let t = self.transform(b);
        let r = self.pivots.len();
        if t[r..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.rref.cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = t[i].clone();
        }
        Some(x)
    }

    /// Kernel basis read off the reduced form: one vector per free column,
    /// with a 1 in that column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let cols = self.rref.cols;
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (i, &p) in self.pivots.iter().enumerate() {
                v[p] = -self.rref[(i, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Nonzero rows of the reduced form.
    pub fn row_space(&self) -> Vec<Vec<Rational>> {
        (0..self.pivots.len()).map(|i| self.rref.row(i).to_vec()).collect()
    }
}

/// Canonical solve of `a * x = b`.
pub fn solve_linear(a: &QMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    a.solve(b)
}

pub fn kernel_basis(a: &QMatrix) -> Vec<Vec<Rational>> {
    a.kernel_basis()
}

pub fn rank(a: &QMatrix) -> usize {
    a.rank()
}

/// Rank of the span of a list of vectors of equal length.
pub fn span_rank(vectors: &[Vec<Rational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    QMatrix::from_rows(vectors.to_vec()).rank()
}
