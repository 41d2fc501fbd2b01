//! Logarithmic Brieskorn lattices of a pair `(f, h)`.
//!
//! Classes are written over the cyclic basis `e_j = [f^(j-1) ω_1]` with
//! coefficients in `θ` and `t` (`t` acts as multiplication by `h`, weight
//! `n`). Everything downstream is derived from one rule:
//!
//! ```text
//! [g ξ_i(f) ω_1] = θ [(ξ_i(g) + tr(ξ_i) g) ω_1]
//! ```

mod checks;
mod connection;
mod reduce;
mod spectrum;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exactalg::{MPoly, Rational};

pub use checks::{
    analyze, f_independence_check, graded_dimension, graded_dimension_prediction, theorem_checks,
    IndependenceReport, LatticeAnalysis, TheoremChecks,
};
pub use connection::{
    bernstein_via_spectral, corner_constant, f_action_matrix, saturation_residue, spectral_polynomial, t_connection,
    verify_cyclic_equation, ConnectionData, CyclicCheck, TConnection, ThetaT,
};
pub use reduce::{reduce_class, reduce_poly, relation_image, rule_residual};
pub use spectrum::{
    elementary_decomposition, spectrum_at_infinity, spectrum_at_zero, ElementaryDecomposition, ElementaryPart,
    Spectrum, MAX_WINDOW_STEPS,
};

/// `Σ_a θ^a p_a ω_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeElement {
    nvars: usize,
    terms: BTreeMap<u32, MPoly>,
}

impl LatticeElement {
    pub fn zero(nvars: usize) -> Self {
        LatticeElement { nvars, terms: BTreeMap::new() }
    }

    /// `ω_1`.
    pub fn omega(nvars: usize) -> Self {
        Self::from_poly(0, MPoly::one(nvars))
    }

    /// `θ^a p ω_1`.
    pub fn from_poly(a: u32, p: MPoly) -> Self {
        let mut el = Self::zero(p.nvars());
        el.add(a, &p);
        el
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &MPoly)> {
        self.terms.iter().map(|(&a, p)| (a, p))
    }

    pub fn add(&mut self, a: u32, p: &MPoly) {
        let slot = self.terms.entry(a).or_insert_with(|| MPoly::zero(p.nvars()));
        *slot = &*slot + p;
        if slot.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Key `(a, b, e)` of the class `θ^a t^b e_(e+1)`.
pub type ClassKey = (i32, u32, u32);

/// `Σ γ θ^a t^b e_(e+1)` with `0 <= e < n`. Negative `a` is allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReducedClass {
    coeffs: BTreeMap<ClassKey, Rational>,
}

impl ReducedClass {
    pub fn zero() -> Self {
        ReducedClass::default()
    }

    /// `θ^a t^b e_(e+1)`.
    pub fn basis(a: i32, b: u32, e: u32) -> Self {
        let mut c = Self::zero();
        c.add_term((a, b, e), &Rational::from_integer(1.into()));
        c
    }

    pub fn add_term(&mut self, key: ClassKey, v: &Rational) {
        if v.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(key).or_insert_with(Rational::zero);
        *slot += v;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &ReducedClass, c: &Rational) {
        for (&k, v) in &other.coeffs {
            self.add_term(k, &(v * c));
        }
    }

    pub fn sub(&self, other: &ReducedClass) -> ReducedClass {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::from_integer((-1).into()));
        out
    }

    pub fn scale(&self, c: &Rational) -> ReducedClass {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Multiplies by `θ^k`.
    pub fn shift_theta(&self, k: i32) -> ReducedClass {
        ReducedClass { coeffs: self.coeffs.iter().map(|(&(a, b, e), v)| ((a + k, b, e), v.clone())).collect() }
    }

    pub fn coeff(&self, key: ClassKey) -> Rational {
        self.coeffs.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (ClassKey, &Rational)> {
        self.coeffs.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sets `θ = 1`; keys become `(b, e)`.
    pub fn at_theta_one(&self) -> BTreeMap<(u32, u32), Rational> {
        let mut out: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (&(_, b, e), v) in &self.coeffs {
            let slot = out.entry((b, e)).or_insert_with(Rational::zero);
            *slot += v;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Weighted degree `a + n b + e` of every term, if they agree.
    pub fn weighted_degree(&self, n: u32) -> Option<i64> {
        let mut degrees = self.coeffs.keys().map(|&(a, b, e)| a as i64 + (n * b + e) as i64);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

impl std::fmt::Display for ReducedClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(a, b, e), v)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({v})")?;
            if a != 0 {
                write!(f, "*θ^{a}")?;
            }
            if b != 0 {
                write!(f, "*t^{b}")?;
            }
            write!(f, "*e{}", e + 1)?;
        }
        Ok(())
    }
}
