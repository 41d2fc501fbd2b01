//! Univariate polynomials in `s` over the rationals, and their factorisation
//! into rational linear factors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// Coefficients stored low degree first; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    /// `s - root`.
    pub fn linear_factor(root: &Rational) -> Self {
        QPoly::new(vec![-root.clone(), Rational::one()])
    }

    pub fn from_roots(roots: &[(Rational, u32)]) -> Self {
        let mut p = QPoly::constant(Rational::one());
        for (r, m) in roots {
            for _ in 0..*m {
                p = p.mul(&QPoly::linear_factor(r));
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `p(a*s + b)`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> QPoly {
        let lin = QPoly::new(vec![b.clone(), a.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(QPoly::zero(), |acc, c| acc.mul(&lin).add(&QPoly::constant(c.clone())))
    }

    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Division by `s - r`; returns the quotient and the remainder `p(r)`.
    pub fn div_linear(&self, r: &Rational) -> (QPoly, Rational) {
        if self.coeffs.is_empty() {
            return (QPoly::zero(), Rational::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &carry * r;
            if i == 0 {
                carry = v;
            } else {
                q[i - 1] = v.clone();
                carry = v;
            }
        }
        (QPoly::new(q), carry)
    }

    /// All rational roots with multiplicity, plus the cofactor left after
    /// dividing them out. The cofactor has degree 0 iff the polynomial splits
    /// over the rationals.
    pub fn rational_roots(&self) -> (Vec<(Rational, u32)>, QPoly) {
        let mut roots: Vec<(Rational, u32)> = Vec::new();
        if self.is_zero() {
            return (roots, QPoly::zero());
        }
        let mut p = self.clone();
        let mut zero_mult = 0;
        while p.coeffs.len() > 1 && p.coeffs[0].is_zero() {
            p.coeffs.remove(0);
            zero_mult += 1;
        }
        if zero_mult > 0 {
            roots.push((Rational::zero(), zero_mult));
        }
        if p.coeffs.len() > 1 {
            let ints = integer_coeffs(&p);
            let a0 = ints[0].abs();
            let an = ints[ints.len() - 1].abs();
            let nums = divisors(&a0);
            let dens = divisors(&an);
            let mut candidates: Vec<Rational> = Vec::new();
            for d in &dens {
                for n in &nums {
                    let c = Rational::new(n.clone(), d.clone());
                    candidates.push(c.clone());
                    candidates.push(-c);
                }
            }
            candidates.sort();
            candidates.dedup();
            for c in candidates {
                let mut mult = 0;
                loop {
                    if p.coeffs.len() <= 1 {
                        break;
                    }
                    let (q, rem) = p.div_linear(&c);
                    if !rem.is_zero() {
                        break;
                    }
                    p = q;
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((c, mult));
                }
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        (roots, p)
    }

    /// Printable form in the variable `s`.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("s"))
    }
}

/// Integer multiple of `p` with coprime coefficients.
fn integer_coeffs(p: &QPoly) -> Vec<BigInt> {
    let l = rational::denominator_lcm(p.coeffs.iter());
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}

/// Positive divisors by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    // factor
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let two = BigInt::from(2);
    let mut p = two.clone();
    while &p * &p <= m {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += if p == two { BigInt::one() } else { two.clone() };
        if p.to_u64().is_none() {
            break;
        }
    }
    if !m.is_one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// One linear factor `(s - root)^multiplicity`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RootFactor {
    #[serde(with = "rational::serde_rational")]
    pub root: Rational,
    pub multiplicity: u32,
}

/// Monic polynomial with all roots rational, kept in factored form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BPoly {
    poly: QPoly,
    factors: Vec<RootFactor>,
}

impl BPoly {
    /// Normalises to monic and factors; fails unless every root is rational.
    pub fn from_poly(p: &QPoly) -> Result<BPoly> {
        if p.is_zero() {
            return Err(Error::NonRationalSpectrum("zero polynomial".into()));
        }
        let monic = p.monic();
        let (roots, rest) = monic.rational_roots();
        if rest.degree() != Some(0) {
            return Err(Error::NonRationalSpectrum(format!(
                "irreducible factor {} of degree {}",
                rest.monic(),
                rest.degree().unwrap_or(0)
            )));
        }
        let factors = roots
            .into_iter()
            .map(|(root, multiplicity)| RootFactor { root, multiplicity })
            .collect();
        let b = BPoly { poly: monic, factors };
        debug_assert_eq!(b.expand(), b.poly);
        Ok(b)
    }

    pub fn from_roots(roots: &[(Rational, u32)]) -> BPoly {
        let poly = QPoly::from_roots(roots);
        let mut merged: std::collections::BTreeMap<Rational, u32> = std::collections::BTreeMap::new();
        for (r, m) in roots.iter().filter(|(_, m)| *m > 0) {
            *merged.entry(r.clone()).or_default() += m;
        }
        let factors = merged.into_iter().map(|(root, multiplicity)| RootFactor { root, multiplicity }).collect();
        BPoly { poly, factors }
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    /// Factors sorted by root ascending.
    pub fn factors(&self) -> &[RootFactor] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    /// Roots with multiplicity, ascending.
    pub fn roots(&self) -> Vec<Rational> {
        self.factors
            .iter()
            .flat_map(|f| std::iter::repeat_n(f.root.clone(), f.multiplicity as usize))
            .collect()
    }

    pub fn multiplicity(&self, root: &Rational) -> u32 {
        self.factors.iter().find(|f| &f.root == root).map_or(0, |f| f.multiplicity)
    }

    /// Product of the stored factors.
    pub fn expand(&self) -> QPoly {
        let pairs: Vec<(Rational, u32)> =
            self.factors.iter().map(|f| (f.root.clone(), f.multiplicity)).collect();
        QPoly::from_roots(&pairs)
    }
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for fac in &self.factors {
            let r = &fac.root;
            if r.is_zero() {
                write!(f, "s")?;
            } else if r.is_negative() {
                write!(f, "(s+{})", -r)?;
            } else {
                write!(f, "(s-{})", r)?;
            }
            if fac.multiplicity > 1 {
                write!(f, "^{}", fac.multiplicity)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    #[test]
    fn compose_and_eval() {
        // p = s^2 - 1 ; p(2s + 1) = 4s^2 + 4s
        let p = QPoly::new(vec![int(-1), int(0), int(1)]);
        let q = p.compose_affine(&int(2), &int(1));
        assert_eq!(q.coeffs(), &[int(0), int(4), int(4)]);
        assert_eq!(q.eval(&rat(1, 2)), int(3));
    }

    #[test]
    fn roots_of_split_poly() {
        let p = QPoly::from_roots(&[(rat(-4, 3), 1), (int(-1), 4), (rat(-2, 3), 1)]).scale(&int(9));
        let b = BPoly::from_poly(&p).unwrap();
        assert_eq!(b.to_string(), "(s+4/3)(s+1)^4(s+2/3)");
        assert_eq!(b.degree(), 6);
        assert_eq!(b.multiplicity(&int(-1)), 4);
    }

    #[test]
    fn zero_roots_and_nonrational() {
        let (roots, rest) = QPoly::new(vec![int(0), int(0), int(-4), int(0), int(1)]).rational_roots();
        assert_eq!(roots, vec![(int(-2), 1), (int(0), 2), (int(2), 1)]);
        assert_eq!(rest.degree(), Some(0));
        let e = BPoly::from_poly(&QPoly::new(vec![int(-2), int(0), int(1)])).unwrap_err();
        assert!(matches!(e, Error::NonRationalSpectrum(_)));
    }

    #[test]
    fn divisor_enumeration() {
        let d: Vec<i64> = divisors(&BigInt::from(12)).iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn printing() {
        let p = QPoly::new(vec![rat(1, 2), int(-1), int(1)]);
        assert_eq!(p.to_string(), "s^2 - s + 1/2");
        assert_eq!(BPoly::from_roots(&[(int(0), 2), (int(3), 1)]).to_string(), "s^2(s-3)");
    }
}
