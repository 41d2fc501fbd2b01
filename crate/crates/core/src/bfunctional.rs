//! Bernstein polynomial from the functional equation
//! `h*(∂) h^(s+1) = B(s) h^s`.
//!
//! Expressions `Σ_k q_k(x, s) h^(s+1-k)` are stored with `q_k` as polynomials
//! in `n + 1` variables, `s` last.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{BPoly, MPoly, Monomial, QPoly, Rational};

/// Constant-coefficient operator; variable `i` stands for `∂_(x_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualOperator {
    poly: MPoly,
}

impl DualOperator {
    pub fn new(poly: MPoly) -> Self {
        DualOperator { poly }
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    pub fn order(&self) -> u32 {
        self.poly.degree().unwrap_or(0)
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }
}

/// `h(∂)`: the coefficients of `h` with variables read as derivatives.
pub fn default_dual(h: &MPoly) -> DualOperator {
    DualOperator::new(h.clone())
}

/// `Σ_k q_k h^(s+1-k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SExpr {
    nvars: usize,
    terms: BTreeMap<u32, MPoly>,
}

impl SExpr {
    /// `h^(s+1)`.
    pub fn start(nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, MPoly::one(nvars + 1));
        SExpr { nvars, terms }
    }

    pub fn zero(nvars: usize) -> Self {
        SExpr { nvars, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &MPoly)> {
        self.terms.iter().map(|(&k, q)| (k, q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_at(&mut self, k: u32, q: &MPoly, c: &Rational) {
        if q.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(|| MPoly::zero(self.nvars + 1));
        slot.add_scaled(q, c);
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_scaled(&mut self, other: &SExpr, c: &Rational) {
        for (&k, q) in &other.terms {
            self.add_at(k, q, c);
        }
    }
}

/// `∂_i (q h^(s+1-k)) = (∂_i q) h^(s+1-k) + (s+1-k) q (∂_i h) h^(s-k)`.
pub fn sexpr_diff(e: &SExpr, i: usize, h: &MPoly) -> SExpr {
    let n = e.nvars;
    let dh = h.derivative(i).extend_vars(1);
    let s = MPoly::var(n + 1, n);
    let one = Rational::one();
    let mut out = SExpr::zero(n);
    for (&k, q) in &e.terms {
        out.add_at(k, &q.derivative(i), &one);
        let mut factor = s.clone();
        factor.add_term(Monomial::one(n + 1), Rational::from_integer((1 - k as i64).into()));
        out.add_at(k + 1, &(&(&factor * q) * &dh), &one);
    }
    out
}

fn apply_monomial(m: &Monomial, h: &MPoly) -> SExpr {
    let mut e = SExpr::start(h.nvars());
    for (i, &times) in m.exps().iter().enumerate() {
        for _ in 0..times {
            e = sexpr_diff(&e, i, h);
        }
    }
    e
}

/// `P h^(s+1)`; monomials of `P` are applied in parallel.
pub fn apply_operator(p: &DualOperator, h: &MPoly) -> SExpr {
    let terms: Vec<(Monomial, Rational)> = p.poly.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    let parts: Vec<(SExpr, Rational)> = terms.par_iter().map(|(m, c)| (apply_monomial(m, h), c.clone())).collect();
    let mut out = SExpr::zero(h.nvars());
    for (part, c) in &parts {
        out.add_scaled(part, c);
    }
    out
}

/// How the identity `T = B(s) h^(m-1)` is confirmed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verification {
    /// Full polynomial identity.
    Exact,
    /// Evaluation at this many seeded rational points.
    Sampled(usize),
}

pub const SAMPLE_SEED: u64 = 0x5a_4d_11;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extracted {
    pub b: BPoly,
    /// Leading coefficient of `B(s)` before normalisation.
    pub leading_constant: Rational,
    pub raw: QPoly,
    pub verification: Verification,
}

/// Coefficient of `x^m` in `p(x, s)`, as a polynomial in `s`.
fn s_coefficient(p: &MPoly, m: &Monomial) -> QPoly {
    let n = m.nvars();
    let mut coeffs: Vec<Rational> = Vec::new();
    for (mono, c) in p.terms() {
        if mono.truncate(n) == *m {
            let d = mono.exps()[n] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rational::zero());
            }
            coeffs[d] += c;
        }
    }
    QPoly::new(coeffs)
}

fn qpoly_in_s(p: &QPoly, n: usize) -> MPoly {
    let mut out = MPoly::zero(n + 1);
    for (d, c) in p.coeffs().iter().enumerate() {
        let mut exps = vec![0u16; n + 1];
        exps[n] = d as u16;
        out.add_term(Monomial::new(exps), c.clone());
    }
    out
}

/// Reads `B(s)` off `e = P h^(s+1)` where `P` has order `m`.
pub fn extract_b(e: &SExpr, h: &MPoly, m: u32, verification: Verification) -> Result<Extracted> {
    let n = h.nvars();
    if m == 0 {
        return Err(Error::NotProportional("operator of order 0".into()));
    }
    if let Some((&k, _)) = e.terms.iter().next_back() {
        if k > m {
            return Err(Error::NotProportional(format!("shift {k} exceeds operator order {m}")));
        }
    }
    let hx = h.extend_vars(1);
    let reference = h.pow(m - 1);
    let (ref_mono, ref_coeff) = reference.leading().map(|(mo, c)| (mo.clone(), c.clone())).expect("h is nonzero");
    let powers: Vec<MPoly> = {
        let mut v = vec![MPoly::one(n + 1)];
        for _ in 0..m {
            let next = &hx * v.last().expect("nonempty");
            v.push(next);
        }
        v
    };
    let mut t = MPoly::zero(n + 1);
    for (&k, q) in &e.terms {
        t = &t + &(q * &powers[(m - k) as usize]);
    }
    let b_raw = s_coefficient(&t, &ref_mono).scale(&(Rational::one() / ref_coeff));
    if b_raw.is_zero() {
        return Err(Error::NotProportional("reference coefficient of T vanishes".into()));
    }
    let ok = match verification {
        Verification::Exact => {
            let rhs = &qpoly_in_s(&b_raw, n) * &powers[(m - 1) as usize];
            t == rhs
        }
        Verification::Sampled(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            let hm1 = &powers[(m - 1) as usize];
            (0..count).all(|_| {
                let point: Vec<Rational> = (0..=n)
                    .map(|_| Rational::new(rng.gen_range(-50i64..=50).into(), rng.gen_range(1i64..=7).into()))
                    .collect();
                t.eval(&point) == b_raw.eval(&point[n]) * hm1.eval(&point)
            })
        }
    };
    if !ok {
        return Err(Error::NotProportional("T is not a multiple of h^(m-1)".into()));
    }
    let leading_constant = b_raw.leading().cloned().expect("nonzero");
    let b = BPoly::from_poly(&b_raw.monic())?;
    Ok(Extracted { b, leading_constant, raw: b_raw, verification })
}

/// `b_h` through `P h^(s+1) = B(s) h^s`, with `P = h(∂)` unless given.
pub fn bernstein_via_functional(h: &MPoly, operator: Option<&DualOperator>, verification: Verification) -> Result<Extracted> {
    let default;
    let p = match operator {
        Some(p) => p,
        None => {
            default = default_dual(h);
            &default
        }
    };
    if p.nvars() != h.nvars() {
        return Err(Error::VariableCountMismatch { left: h.nvars(), right: p.nvars() });
    }
    let e = apply_operator(p, h);
    extract_b(&e, h, p.order(), verification)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly_str;
    use crate::exactalg::rational::int;

    fn xy() -> MPoly {
        parse_poly_str("x*y", &["x", "y"]).unwrap()
    }

    fn sx(text: &str) -> MPoly {
        parse_poly_str(text, &["x", "y", "s"]).unwrap()
    }

    #[test]
    fn first_derivative() {
        let e = sexpr_diff(&SExpr::start(2), 0, &xy());
        let terms: Vec<(u32, MPoly)> = e.terms().map(|(k, q)| (k, q.clone())).collect();
        assert_eq!(terms, vec![(1, sx("(s+1)*y"))]);
        assert!(sexpr_diff(&SExpr::zero(2), 1, &xy()).is_zero());
    }

    #[test]
    fn mixed_derivative() {
        let e = apply_operator(&default_dual(&xy()), &xy());
        let terms: Vec<(u32, MPoly)> = e.terms().map(|(k, q)| (k, q.clone())).collect();
        assert_eq!(terms, vec![(1, sx("s+1")), (2, sx("(s+1)*s*x*y"))]);
        let r = extract_b(&e, &xy(), 2, Verification::Exact).unwrap();
        assert_eq!(r.b.to_string(), "(s+1)^2");
        assert_eq!(r.leading_constant, int(1));
    }

    #[test]
    fn identity_operator() {
        let p = DualOperator::new(MPoly::one(2));
        let e = apply_operator(&p, &xy());
        assert_eq!(e, SExpr::start(2));
        assert!(matches!(extract_b(&e, &xy(), 0, Verification::Exact), Err(Error::NotProportional(_))));
    }

    #[test]
    fn a3_and_rescaling() {
        let h = parse_poly_str("x*y*z", &["x", "y", "z"]).unwrap();
        let r = bernstein_via_functional(&h, None, Verification::Exact).unwrap();
        assert_eq!(r.b.to_string(), "(s+1)^3");
        let scaled = DualOperator::new(h.scale(&int(-5)));
        let r2 = bernstein_via_functional(&h, Some(&scaled), Verification::Exact).unwrap();
        assert_eq!(r2.b, r.b);
        assert_eq!(r2.leading_constant, int(-5));
        let r3 = bernstein_via_functional(&h, None, Verification::Sampled(6)).unwrap();
        assert_eq!(r3.b, r.b);
    }

    #[test]
    fn wrong_operator_detected() {
        let h = parse_poly_str("x*y", &["x", "y"]).unwrap();
        let p = DualOperator::new(parse_poly_str("x^2", &["x", "y"]).unwrap());
        assert!(matches!(bernstein_via_functional(&h, Some(&p), Verification::Exact), Err(Error::NotProportional(_))));
    }
}
