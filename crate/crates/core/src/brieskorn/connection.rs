use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::reduce::reduce_poly;
use super::ReducedClass;
use crate::defalg::PairData;
use crate::error::{Error, Result};
use crate::exactalg::rational::int;
use crate::exactalg::{BPoly, QMatrix, QPoly, Rational};

/// Polynomial in `θ` and `t`, keyed by `(θ-exponent, t-exponent)`.
pub type ThetaT = BTreeMap<(u32, u32), Rational>;

/// Action of `f` on the cyclic basis: `F e_j = e_(j+1)` for `j < n`, and the
/// last column from reducing `f^n ω_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionData {
    pub n: usize,
    /// Entries `(j, n)` of `F`, `j = 1..n`.
    pub column: Vec<ThetaT>,
    /// `α_j`: coefficient of `θ^(n+1-j)` in entry `(j, n)` at `t = 0`.
    pub alpha: Vec<Rational>,
    /// Coefficient of `t` in entry `(1, n)`; equals `-c`.
    pub c_from_f: Rational,
    /// Residue of the saturated lattice in the basis `θ^(1-j) e_j`.
    pub residue: QMatrix,
}

impl ConnectionData {
    /// Entry `(i, j)` of `F` (0-based).
    pub fn entry(&self, i: usize, j: usize) -> ThetaT {
        if j + 1 == self.n {
            return self.column[i].clone();
        }
        let mut out = ThetaT::new();
        if i == j + 1 {
            out.insert((0, 0), Rational::one());
        }
        out
    }
}

pub fn f_action_matrix(pair: &PairData) -> Result<ConnectionData> {
    let n = pair.n();
    let n32 = n as u32;
    let cls = reduce_poly(pair, 0, &pair.f.pow(n32))?;
    let mut column = vec![ThetaT::new(); n];
    for ((a, b, e), v) in cls.terms() {
        let row = e as usize;
        if a < 0 || a as i64 + (n32 * b) as i64 != (n32 - e) as i64 {
            return Err(Error::NotHomogeneousEntry { row: row + 1, col: n });
        }
        column[row].insert((a as u32, b), v.clone());
    }
    let alpha: Vec<Rational> = (0..n)
        .map(|j| column[j].get(&((n - j) as u32, 0)).cloned().unwrap_or_else(Rational::zero))
        .collect();
    let c_from_f = column[0].get(&(0, 1)).cloned().unwrap_or_else(Rational::zero);
    let residue = residue_from_alpha(&alpha);
    Ok(ConnectionData { n, column, alpha, c_from_f, residue })
}

fn residue_from_alpha(alpha: &[Rational]) -> QMatrix {
    let n = alpha.len();
    let mut r = QMatrix::zeros(n, n);
    for j in 0..n.saturating_sub(1) {
        r[(j, j)] = int(-(j as i64));
        r[(j + 1, j)] = Rational::one();
    }
    for (k, a) in alpha.iter().enumerate() {
        r[(k, n - 1)] = a.clone();
    }
    r[(n - 1, n - 1)] -= Rational::from_integer(((n - 1) as i64).into());
    r
}

/// Matrix of `θ∇_θ` on `ẽ_j = θ^(1-j) e_j`; column `j` holds `θ∇ ẽ_j`.
pub fn saturation_residue(conn: &ConnectionData) -> QMatrix {
    residue_from_alpha(&conn.alpha)
}

fn n_rational(n: usize) -> Rational {
    Rational::from_integer((n as i64).into())
}

fn split(p: &QPoly) -> Result<BPoly> {
    BPoly::from_poly(&p.monic())
}

/// `b_h(s) = n^(-n) χ_R(n(s+1))`.
pub fn bernstein_via_spectral(conn: &ConnectionData) -> Result<BPoly> {
    let chi = conn.residue.char_poly()?;
    let n = n_rational(conn.n);
    split(&chi.compose_affine(&n, &n))
}

/// `b_(G_1)(s) = n^(-n) χ_R(n s)`.
pub fn spectral_polynomial(conn: &ConnectionData) -> Result<BPoly> {
    let chi = conn.residue.char_poly()?;
    split(&chi.compose_affine(&n_rational(conn.n), &Rational::zero()))
}

/// `t∇_t` acting on reduced classes:
/// `t∇_t(θ^a t^b e_j) = θ^a t^b ((b + (j-1)/n) e_j - θ^(-1) F e_j / n)`.
#[derive(Clone, Debug)]
pub struct TConnection {
    n: usize,
    column: Vec<ThetaT>,
}

pub fn t_connection(conn: &ConnectionData) -> TConnection {
    TConnection { n: conn.n, column: conn.column.clone() }
}

impl TConnection {
    pub fn apply(&self, x: &ReducedClass) -> ReducedClass {
        let n = self.n as u32;
        let inv_n = Rational::new(1.into(), (n as i64).into());
        let mut out = ReducedClass::zero();
        for ((a, b, e), v) in x.terms() {
            let weight = Rational::from_integer((b as i64).into()) + Rational::new((e as i64).into(), (n as i64).into());
            out.add_term((a, b, e), &(v * weight));
            let w = -(v * &inv_n);
            if e + 1 < n {
                out.add_term((a - 1, b, e + 1), &w);
            } else {
                for (k, entry) in self.column.iter().enumerate() {
                    for (&(a2, b2), c) in entry {
                        out.add_term((a - 1 + a2 as i32, b + b2, k as u32), &(&w * c));
                    }
                }
            }
        }
        out
    }
}

/// Constant in the corner of the normal form `A_0`, whose subdiagonal is
/// `-1`: passing from `e_j` to `ω_j = (-1)^(j-1) e_j` turns `-c` into
/// `(-1)^n c`.
pub fn corner_constant(n: usize, c: &Rational) -> Rational {
    if n.is_multiple_of(2) {
        c.clone()
    } else {
        -c.clone()
    }
}

/// Outcome of `b_(G_1)(t∇_t) ω_1 = -c'/n^n t ω_1` at `θ = 1`, `c'` the
/// corner constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCheck {
    pub holds: bool,
    /// `lhs - rhs` at `θ = 1`, keyed by `(b, e)`.
    pub residual: BTreeMap<(u32, u32), Rational>,
}

pub fn verify_cyclic_equation(conn: &ConnectionData, b_g1: &BPoly, c: &Rational) -> CyclicCheck {
    let tc = t_connection(conn);
    let mut power = ReducedClass::basis(0, 0, 0);
    let mut lhs = ReducedClass::zero();
    for coeff in b_g1.poly().coeffs() {
        lhs.add_scaled(&power, coeff);
        power = tc.apply(&power);
    }
    let mut residual = lhs.at_theta_one();
    let n = conn.n as i64;
    let nn = num_traits::pow(Rational::from_integer(n.into()), conn.n);
    let rhs = -(corner_constant(conn.n, c) / nn);
    let slot = residual.entry((1, 0)).or_insert_with(Rational::zero);
    *slot -= rhs;
    residual.retain(|_, v| !v.is_zero());
    CyclicCheck { holds: residual.is_empty(), residual }
}
