use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::connection::{
    bernstein_via_spectral, f_action_matrix, spectral_polynomial, verify_cyclic_equation, ConnectionData, CyclicCheck,
};
use super::spectrum::{elementary_decomposition, spectrum_at_infinity, spectrum_at_zero, ElementaryDecomposition, Spectrum};
use crate::defalg::{compute_c, NormalForm, PairData};
use crate::error::Result;
use crate::exactalg::rational::{int, is_integer};
use crate::exactalg::sparse::{SparseColumnSolver, SparseRow};
use crate::exactalg::{monomial_basis, BPoly, MPoly, Monomial, QMatrix, Rational};
use crate::freediv::DivisorData;

/// Theorem-level checks. `conjecture_zero_symmetric` is informational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremChecks {
    /// Roots of `b_h` lie in `(-2, 0)`.
    pub roots_in_interval: bool,
    /// Root multiset symmetric about `-1`.
    pub roots_symmetric: bool,
    /// `-1` is a root and the only integer root.
    pub minus_one_only_integer_root: bool,
    /// Sorted `ν` satisfies `ν_i + ν_(n+1-i) = n - 1`.
    pub nu_symmetric: bool,
    /// Smallest `k` with `{k, .., n-1-k}` inside the `ν` multiset.
    pub integer_block: Option<u32>,
    /// Multiplicity of `-1` in `b_h` equals `n - 2k`.
    pub block_matches_root_multiplicity: bool,
    /// `tr R = 0`, i.e. the roots of `b_h` sum to `-n`.
    pub trace_zero: bool,
    /// `b_h(s) = b_(G_1)(s+1)`.
    pub shift_consistent: bool,
    /// Roots of `χ_R` are `n(α+1)` over the roots `α` of `b_h`.
    pub residue_roots_match: bool,
    /// The `θ = 0` spectrum is symmetric about `(n-1)/2`.
    pub conjecture_zero_symmetric: bool,
}

impl TheoremChecks {
    /// All hard checks (the conjecture is excluded).
    pub fn all_hold(&self) -> bool {
        self.roots_in_interval
            && self.roots_symmetric
            && self.minus_one_only_integer_root
            && self.nu_symmetric
            && self.integer_block.is_some()
            && self.block_matches_root_multiplicity
            && self.trace_zero
            && self.shift_consistent
            && self.residue_roots_match
    }
}

fn minimal_integer_block(nu: &Spectrum, n: usize) -> Option<u32> {
    let n = n as i64;
    (0..=(n - 1) / 2).find(|&k| (k..=n - 1 - k).all(|v| nu.multiplicity(&int(v)) > 0)).map(|k| k as u32)
}

pub fn theorem_checks(
    n: usize,
    b_h: &BPoly,
    b_g1: &BPoly,
    residue: &QMatrix,
    nu: &Spectrum,
    zero: &Spectrum,
) -> Result<TheoremChecks> {
    let roots = b_h.roots();
    let minus_one = int(-1);
    let minus_two = int(-2);
    let roots_in_interval = roots.iter().all(|r| *r > minus_two && r < &Rational::zero());
    let mut mirrored: Vec<Rational> = roots.iter().map(|r| &minus_two - r).collect();
    mirrored.sort();
    let roots_symmetric = mirrored == roots;
    let minus_one_only_integer_root =
        roots.contains(&minus_one) && roots.iter().filter(|r| is_integer(r)).all(|r| *r == minus_one);
    let total = int(n as i64 - 1);
    let nu_symmetric = nu.pairs_sum_to(&total);
    let integer_block = minimal_integer_block(nu, n);
    let block_matches_root_multiplicity =
        integer_block.is_some_and(|k| b_h.multiplicity(&minus_one) as i64 == n as i64 - 2 * k as i64);
    let trace_zero = residue.trace().is_zero() && roots.iter().sum::<Rational>() == int(-(n as i64));
    let shifted = b_g1.poly().compose_affine(&Rational::one(), &Rational::one());
    let shift_consistent = shifted == *b_h.poly();
    let chi = BPoly::from_poly(&residue.char_poly()?)?;
    let nr = int(n as i64);
    let mut expected: Vec<Rational> = roots.iter().map(|a| &nr * (a + Rational::one())).collect();
    expected.sort();
    let residue_roots_match = chi.roots() == expected;
    let conjecture_zero_symmetric = zero.pairs_sum_to(&total);
    Ok(TheoremChecks {
        roots_in_interval,
        roots_symmetric,
        minus_one_only_integer_root,
        nu_symmetric,
        integer_block,
        block_matches_root_multiplicity,
        trace_zero,
        shift_consistent,
        residue_roots_match,
        conjecture_zero_symmetric,
    })
}

/// Everything derived from the lattice of one pair.
#[derive(Clone, Debug)]
pub struct LatticeAnalysis {
    pub normal_form: NormalForm,
    pub connection: ConnectionData,
    pub b_h: BPoly,
    pub b_g1: BPoly,
    pub elementary: ElementaryDecomposition,
    pub spectrum_zero: Spectrum,
    pub spectrum_infinity: Spectrum,
    pub cyclic: CyclicCheck,
    pub checks: TheoremChecks,
    /// `c` from the normal form agrees with the corner of `F`.
    pub c_consistent: bool,
}

pub fn analyze(pair: &PairData) -> Result<LatticeAnalysis> {
    let normal_form = compute_c(pair)?;
    let connection = f_action_matrix(pair)?;
    let b_h = bernstein_via_spectral(&connection)?;
    let b_g1 = spectral_polynomial(&connection)?;
    let elementary = elementary_decomposition(&connection)?;
    let spectrum_zero = spectrum_at_zero(&elementary)?;
    let spectrum_infinity = spectrum_at_infinity(&elementary)?;
    let cyclic = verify_cyclic_equation(&connection, &b_g1, &normal_form.c);
    let checks = theorem_checks(pair.n(), &b_h, &b_g1, &connection.residue, &spectrum_infinity, &spectrum_zero)?;
    let c_consistent = connection.c_from_f == -normal_form.c.clone();
    Ok(LatticeAnalysis {
        normal_form,
        connection,
        b_h,
        b_g1,
        elementary,
        spectrum_zero,
        spectrum_infinity,
        cyclic,
        checks,
        c_consistent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub equal: bool,
    pub c: (Rational, Rational),
    pub b_h: (BPoly, BPoly),
    pub nu: (Spectrum, Spectrum),
    pub zero: (Spectrum, Spectrum),
}

/// Compares `b_h` and both spectra for two generic forms.
pub fn f_independence_check(divisor: &DivisorData, f1: &MPoly, f2: &MPoly) -> Result<IndependenceReport> {
    let a = analyze(&PairData::generic(divisor.clone(), f1.clone())?)?;
    let b = analyze(&PairData::generic(divisor.clone(), f2.clone())?)?;
    let equal = a.b_h == b.b_h && a.spectrum_infinity == b.spectrum_infinity && a.spectrum_zero == b.spectrum_zero;
    Ok(IndependenceReport {
        equal,
        c: (a.normal_form.c, b.normal_form.c),
        b_h: (a.b_h, b.b_h),
        nu: (a.spectrum_infinity, b.spectrum_infinity),
        zero: (a.spectrum_zero, b.spectrum_zero),
    })
}

/// `#{(a, b, e) : a + n b + e = d, 0 <= e < n}`.
pub fn graded_dimension_prediction(n: usize, d: u32) -> usize {
    let n = n as u32;
    (0..=d / n).map(|b| (d - n * b + 1).min(n) as usize).sum()
}

/// Dimension of the degree-`d` part of the lattice: `θ`-polynomial forms
/// `Σ θ^a p_a ω_1` with `a + deg p_a = d`, modulo the relations
/// `θ^a (g ξ_i(f) - θ (ξ_i(g) + tr(ξ_i) g))`.
pub fn graded_dimension(pair: &PairData, d: u32) -> usize {
    let n = pair.n();
    let mut index: HashMap<(u32, Monomial), usize> = HashMap::new();
    for a in 0..=d {
        for m in monomial_basis(n, d - a) {
            let next = index.len();
            index.insert((a, m), next);
        }
    }
    let total = index.len();
    let mut rows: Vec<SparseRow> = Vec::new();
    let one = Rational::one();
    let push = |row: &mut SparseRow, a: u32, p: &MPoly, sign: &Rational| {
        for (m, c) in p.terms() {
            let j = index[&(a, m.clone())];
            let slot = row.entry(j).or_insert_with(Rational::zero);
            *slot += c * sign;
        }
    };
    let minus = -one.clone();
    for a in 0..d {
        for m in monomial_basis(n, d - a - 1) {
            let g = MPoly::monomial(m, one.clone());
            for (xi, jac) in pair.divisor.relative_fields.iter().zip(&pair.jacobian_gens) {
                let mut row = SparseRow::new();
                push(&mut row, a, &(&g * jac), &one);
                let mut image = xi.apply(&g);
                image.add_scaled(&g, xi.trace());
                push(&mut row, a + 1, &image, &minus);
                rows.push(row);
            }
        }
    }
    total - SparseColumnSolver::new(&rows).rank()
}
