use num_traits::{One, Zero};
use serde::Serialize;

use super::connection::ConnectionData;
use crate::error::{Error, Result};
use crate::exactalg::eigen::{chain_basis, eigen_components};
use crate::exactalg::matrix::span_rank;
use crate::exactalg::rational::{ceil, serde_rational_vec};
use crate::exactalg::{rational_eigenstructure, EigenBlock, QMatrix, Rational};

/// Multiset of rationals, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Spectrum {
    #[serde(with = "serde_rational_vec")]
    values: Vec<Rational>,
}

impl Spectrum {
    pub fn new(mut values: Vec<Rational>) -> Self {
        values.sort();
        Spectrum { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn multiplicity(&self, v: &Rational) -> usize {
        self.values.iter().filter(|x| *x == v).count()
    }

    /// `(value, multiplicity)` ascending.
    pub fn multiplicities(&self) -> Vec<(Rational, usize)> {
        let mut out: Vec<(Rational, usize)> = Vec::new();
        for v in &self.values {
            match out.last_mut() {
                Some((last, m)) if last == v => *m += 1,
                _ => out.push((v.clone(), 1)),
            }
        }
        out
    }

    /// `v_i + v_(n+1-i) = total` for the sorted values.
    pub fn pairs_sum_to(&self, total: &Rational) -> bool {
        let n = self.values.len();
        (0..n).all(|i| &self.values[i] + &self.values[n - 1 - i] == *total)
    }
}

impl std::fmt::Display for Spectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// One elementary piece `θ^k ẽ·v` of a generator, `v` in a generalised
/// eigenspace of the residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryPart {
    pub eigenvalue: Rational,
    pub theta_power: u32,
    pub vector: Vec<Rational>,
}

impl ElementaryPart {
    pub fn exponent(&self) -> Rational {
        &self.eigenvalue + Rational::from_integer(self.theta_power.into())
    }
}

/// Generators `e_j = θ^(j-1) ẽ_j` split along the Jordan structure of `R`.
#[derive(Clone, Debug)]
pub struct ElementaryDecomposition {
    pub n: usize,
    pub blocks: Vec<EigenBlock>,
    pub basis: QMatrix,
    /// `parts[j]` decomposes `e_(j+1)`.
    pub parts: Vec<Vec<ElementaryPart>>,
    /// Every `e_j` is reassembled exactly from its parts.
    pub exact: bool,
}

pub fn elementary_decomposition(conn: &ConnectionData) -> Result<ElementaryDecomposition> {
    let n = conn.n;
    let blocks = rational_eigenstructure(&conn.residue)?;
    let basis = chain_basis(&blocks, n);
    let inverse = basis
        .inverse()
        .ok_or_else(|| Error::NonRationalSpectrum("Jordan basis is singular".into()))?;
    let mut parts = Vec::with_capacity(n);
    let mut exact = true;
    for j in 0..n {
        let mut unit = vec![Rational::zero(); n];
        unit[j] = Rational::one();
        let comps = eigen_components(&blocks, &inverse, &unit);
        let mut sum = vec![Rational::zero(); n];
        let mut row = Vec::new();
        for (block, comp) in blocks.iter().zip(comps) {
            for (s, c) in sum.iter_mut().zip(&comp) {
                *s += c;
            }
            if comp.iter().any(|c| !c.is_zero()) {
                row.push(ElementaryPart { eigenvalue: block.value.clone(), theta_power: j as u32, vector: comp });
            }
        }
        exact &= sum == unit;
        parts.push(row);
    }
    Ok(ElementaryDecomposition { n, blocks, basis, parts, exact })
}

/// Largest number of window enlargements before giving up.
pub const MAX_WINDOW_STEPS: usize = 4;

impl ElementaryDecomposition {
    fn spaces(&self) -> Vec<(Rational, Vec<Vec<Rational>>)> {
        self.blocks.iter().map(|b| (b.value.clone(), b.vectors().cloned().collect())).collect()
    }

    fn initial_window(&self) -> usize {
        let values: Vec<&Rational> = self.blocks.iter().map(|b| &b.value).collect();
        let spread = match (values.first(), values.last()) {
            (Some(lo), Some(hi)) => ceil(&(*hi - *lo)).try_into().unwrap_or(0usize),
            _ => 0,
        };
        self.n + spread + 1
    }

    /// Dimension of `span(vs) ∩ C^m` (vectors vanishing past coordinate `m`).
    fn dim_in_prefix(vs: &[Vec<Rational>], m: usize) -> usize {
        if vs.is_empty() {
            return 0;
        }
        let tails: Vec<Vec<Rational>> = vs.iter().map(|v| v[m..].to_vec()).collect();
        vs.len() - span_rank(&tails)
    }

    /// `dim (F ∩ E) / (F ∩ θE)` for the filtration piece `F` spanned by
    /// elementary sections whose exponent satisfies `keep`.
    fn graded_dim(&self, spaces: &[(Rational, Vec<Vec<Rational>>)], window: usize, keep: &dyn Fn(&Rational) -> bool) -> usize {
        let n = self.n;
        let mut total = 0isize;
        for k in 0..window {
            let shift = Rational::from_integer((k as i64).into());
            let vs: Vec<Vec<Rational>> = spaces
                .iter()
                .filter(|(l, _)| keep(&(l + &shift)))
                .flat_map(|(_, v)| v.iter().cloned())
                .collect();
            total += Self::dim_in_prefix(&vs, (k + 1).min(n)) as isize;
            total -= Self::dim_in_prefix(&vs, k.min(n)) as isize;
        }
        total as usize
    }

    fn candidates(&self, window: usize) -> Vec<Rational> {
        let mut c: Vec<Rational> = self
            .blocks
            .iter()
            .flat_map(|b| (-1..window as i64).map(move |k| &b.value + Rational::from_integer(k.into())))
            .collect();
        c.sort();
        c.dedup();
        c
    }

    fn spectrum_with(&self, window: usize, at_zero: bool) -> Spectrum {
        let spaces = self.spaces();
        let mut values = Vec::new();
        for alpha in self.candidates(window) {
            let m = if at_zero {
                self.graded_dim(&spaces, window, &|x| *x >= alpha) - self.graded_dim(&spaces, window, &|x| *x > alpha)
            } else {
                self.graded_dim(&spaces, window, &|x| *x <= alpha) - self.graded_dim(&spaces, window, &|x| *x < alpha)
            };
            values.extend(std::iter::repeat_n(alpha.clone(), m));
        }
        Spectrum::new(values)
    }

    fn stable_spectrum(&self, at_zero: bool) -> Result<Spectrum> {
        let mut window = self.initial_window();
        let mut current = self.spectrum_with(window, at_zero);
        for _ in 0..MAX_WINDOW_STEPS {
            let next = self.spectrum_with(window + 1, at_zero);
            if next == current && current.len() == self.n {
                return Ok(current);
            }
            window += 1;
            current = next;
        }
        Err(Error::WindowUnstable(window))
    }
}

/// Jumps of the decreasing filtration `V^α` on `E / θE`.
pub fn spectrum_at_zero(el: &ElementaryDecomposition) -> Result<Spectrum> {
    el.stable_spectrum(true)
}

/// Jumps of the increasing filtration at `θ = ∞` on `E / θE`.
pub fn spectrum_at_infinity(el: &ElementaryDecomposition) -> Result<Spectrum> {
    el.stable_spectrum(false)
}
