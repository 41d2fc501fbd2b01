//! Sparse exact elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::rational::Rational;

pub type SparseRow = BTreeMap<usize, Rational>;

/// Solver for `A x = b` with sparse columns. Pivot columns are the
/// leftmost independent ones and free unknowns are zero, which matches the
/// solution read off the reduced row echelon form of `A`. Internally a
/// sparse LU factorisation; pivot rows are picked by lowest row count.
#[derive(Clone, Debug)]
pub struct SparseColumnSolver {
    ncols: usize,
    pivots: Vec<Pivot>,
}

#[derive(Clone, Debug)]
struct Pivot {
    row: usize,
    col: usize,
    /// Reduced column scaled to 1 at `row`.
    vector: SparseRow,
    scale: Rational,
    /// `(k, c)`: `c` times pivot `k`'s vector was subtracted.
    multipliers: Vec<(usize, Rational)>,
}

fn axpy(target: &mut SparseRow, c: &Rational, v: &SparseRow) {
    for (&j, x) in v {
        let slot = target.entry(j).or_insert_with(Rational::zero);
        *slot -= c * x;
        if slot.is_zero() {
            target.remove(&j);
        }
    }
}

impl SparseColumnSolver {
    pub fn new(columns: &[SparseRow]) -> Self {
        let mut row_count: BTreeMap<usize, usize> = BTreeMap::new();
        for col in columns {
            for &i in col.keys() {
                *row_count.entry(i).or_default() += 1;
            }
        }
        let mut solver = SparseColumnSolver { ncols: columns.len(), pivots: Vec::new() };
        for (j, col) in columns.iter().enumerate() {
            let (rest, multipliers) = solver.reduce(col.clone());
            let Some(row) = rest.keys().copied().min_by_key(|i| (row_count[i], *i)) else {
                continue;
            };
            let scale = rest[&row].clone();
            let inv = Rational::one() / &scale;
            let vector = rest.iter().map(|(&i, x)| (i, x * &inv)).collect();
            solver.pivots.push(Pivot { row, col: j, vector, scale, multipliers });
        }
        solver
    }

    fn reduce(&self, mut v: SparseRow) -> (SparseRow, Vec<(usize, Rational)>) {
        v.retain(|_, x| !x.is_zero());
        let mut used = Vec::new();
        for (k, p) in self.pivots.iter().enumerate() {
            if let Some(c) = v.get(&p.row).cloned() {
                axpy(&mut v, &c, &p.vector);
                used.push((k, c));
            }
        }
        (v, used)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|p| p.col).collect()
    }

    /// Canonical solution, or `None` if `b` is outside the column span.
    pub fn solve(&self, b: &SparseRow) -> Option<Vec<Rational>> {
        let (rest, used) = self.reduce(b.clone());
        if !rest.is_empty() {
            return None;
        }
        let k = self.pivots.len();
        let mut rhs = vec![Rational::zero(); k];
        for (i, c) in used {
            rhs[i] = c;
        }
        let mut x = vec![Rational::zero(); self.ncols];
        for i in (0..k).rev() {
            let p = &self.pivots[i];
            let xi = &rhs[i] / &p.scale;
            if !xi.is_zero() {
                for (l, c) in &p.multipliers {
                    rhs[*l] -= c * &xi;
                }
            }
            x[p.col] = xi;
        }
        Some(x)
    }
}
