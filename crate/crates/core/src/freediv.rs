//! Linear logarithmic vector fields of a homogeneous polynomial, Saito's
//! freeness criterion and a Lie-algebra reductivity probe.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::matrix::span_rank;
use crate::exactalg::rational::{self, Rational};
use crate::exactalg::{monomial_basis, MPoly, QMatrix};

/// Linear vector field `sum_{i,j} A_ij x_j ∂_i` with `ξ(h) = λ h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearDerivation {
    matrix: QMatrix,
    h_eigenvalue: Rational,
    trace: Rational,
}

impl LinearDerivation {
    pub fn new(matrix: QMatrix, h_eigenvalue: Rational) -> Self {
        assert!(matrix.is_square());
        let trace = matrix.trace();
        LinearDerivation { matrix, h_eigenvalue, trace }
    }

    pub fn euler(n: usize) -> Self {
        LinearDerivation::new(QMatrix::identity(n), Rational::from_integer((n as i64).into()))
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn h_eigenvalue(&self) -> &Rational {
        &self.h_eigenvalue
    }

    /// Divergence of the field.
    pub fn trace(&self) -> &Rational {
        &self.trace
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Coefficient of `∂_i`, a linear form.
    pub fn component(&self, i: usize) -> MPoly {
        MPoly::linear(self.matrix.row(i))
    }

    /// `ξ(p) = sum_i (sum_j A_ij x_j) ∂_i p`.
    pub fn apply(&self, p: &MPoly) -> MPoly {
        let n = self.dim();
        assert_eq!(p.nvars(), n, "variable count mismatch");
        let mut out = MPoly::zero(n);
        for i in 0..n {
            let row = self.matrix.row(i);
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            let d = p.derivative(i);
            if d.is_zero() {
                continue;
            }
            out = &out + &(&self.component(i) * &d);
        }
        out
    }

    /// Rescales so the first nonzero entry is 1; used only for display.
    pub fn normalized(&self) -> LinearDerivation {
        match self.matrix.entries().iter().find(|v| !v.is_zero()) {
            None => self.clone(),
            Some(first) => {
                let inv = first.recip();
                LinearDerivation::new(self.matrix.scale(&inv), &self.h_eigenvalue * &inv)
            }
        }
    }

    pub fn is_euler(&self) -> bool {
        self.matrix == QMatrix::identity(self.dim()) && self.h_eigenvalue == Rational::from_integer((self.dim() as i64).into())
    }

    /// Field with matrix `[A, B]`; this is the vector-field bracket up to sign.
    pub fn commutator(&self, other: &LinearDerivation) -> QMatrix {
        self.matrix.commutator(&other.matrix)
    }
}

/// All linear fields `ξ` with `ξ(h) = λ h` for some rational `λ`, as a
/// kernel basis of the linear system in `(A, λ)`.
pub fn linear_log_fields(h: &MPoly) -> Result<Vec<LinearDerivation>> {
    if !h.is_homogeneous() || h.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    let n = h.nvars();
    let deg = h.degree().unwrap_or(0);
    let rows = monomial_basis(n, deg);
    let index = rows.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(n * n + 1);
    let partials: Vec<MPoly> = (0..n).map(|i| h.derivative(i)).collect();
    for partial in &partials {
        for j in 0..n {
            let col = &MPoly::var(n, j) * partial;
            cols.push(col.coords(&index, rows.len()));
        }
    }
    cols.push((-h).coords(&index, rows.len()));
    let system = QMatrix::from_columns(&cols, rows.len());
    let kernel = system.kernel_basis();
    let mut fields = Vec::with_capacity(kernel.len());
    for v in kernel {
        let matrix = QMatrix::from_flat(n, n, v[..n * n].to_vec());
        let field = LinearDerivation::new(matrix, v[n * n].clone());
        debug_assert_eq!(field.apply(h), h.scale(field.h_eigenvalue()));
        fields.push(field);
    }
    Ok(fields)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaitoCertificate {
    pub ok: bool,
    /// `det = unit * h` when `ok`.
    #[serde(with = "rational::serde_rational")]
    pub unit: Rational,
}

/// Determinant of an `n x n` matrix of polynomials, by expansion over column
/// subsets.
pub fn poly_determinant(m: &[Vec<MPoly>], nvars: usize) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one(nvars);
    }
    let mut layer: std::collections::HashMap<u32, MPoly> = std::collections::HashMap::new();
    layer.insert(0, MPoly::one(nvars));
    for (r, row) in m.iter().enumerate() {
        let mut next: std::collections::HashMap<u32, MPoly> = std::collections::HashMap::new();
        for (&set, minor) in &layer {
            for (j, entry) in row.iter().enumerate() {
                if set & (1 << j) != 0 || entry.is_zero() {
                    continue;
                }
                let above = (set >> (j + 1)).count_ones();
                let mut term = entry * minor;
                if above % 2 == 1 {
                    term = -&term;
                }
                let slot = next.entry(set | (1 << j)).or_insert_with(|| MPoly::zero(nvars));
                *slot = &*slot + &term;
            }
        }
        next.retain(|_, p| !p.is_zero());
        layer = next;
        debug_assert!(layer.keys().all(|s| s.count_ones() as usize == r + 1));
    }
    layer.remove(&((1u32 << n) - 1)).unwrap_or_else(|| MPoly::zero(nvars))
}

/// Saito's criterion: the coefficient determinant of `n` fields must be a
/// nonzero constant multiple of `h`.
pub fn saito_check(h: &MPoly, fields: &[LinearDerivation]) -> Result<SaitoCertificate> {
    let n = h.nvars();
    if fields.len() != n {
        return Err(Error::WrongCount { expected: n, got: fields.len() });
    }
    let rows: Vec<Vec<MPoly>> = fields
        .iter()
        .map(|f| (0..n).map(|i| f.component(i)).collect())
        .collect();
    let det = poly_determinant(&rows, n);
    let fail = SaitoCertificate { ok: false, unit: Rational::zero() };
    let (Some((m, hc)), false) = (h.leading(), det.is_zero()) else {
        return Ok(fail);
    };
    let unit = det.coeff(m) / hc;
    if unit.is_zero() || det != h.scale(&unit) {
        return Ok(fail);
    }
    Ok(SaitoCertificate { ok: true, unit })
}

/// A homogeneous polynomial certified as a linear free divisor.
#[derive(Clone, Debug)]
pub struct DivisorData {
    pub n: usize,
    pub h: MPoly,
    pub euler: LinearDerivation,
    /// Basis of the fields annihilating `h`.
    pub relative_fields: Vec<LinearDerivation>,
    /// All linear logarithmic fields (kernel basis).
    pub log_fields: Vec<LinearDerivation>,
    pub saito: SaitoCertificate,
}

impl DivisorData {
    /// Euler field first, then the relative basis.
    pub fn saito_basis(&self) -> Vec<LinearDerivation> {
        let mut all = vec![self.euler.clone()];
        all.extend(self.relative_fields.iter().cloned());
        all
    }
}

pub fn build_divisor(h: &MPoly) -> Result<DivisorData> {
    let n = h.nvars();
    if !h.is_homogeneous() || h.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    let fields = linear_log_fields(h)?;
    if fields.len() < n {
        return Err(Error::NotLinearFree(format!(
            "only {} linear logarithmic fields, need {n}",
            fields.len()
        )));
    }
    let degree = h.degree().unwrap_or(0);
    if degree as usize != n {
        return Err(Error::DegreeMismatch { degree, nvars: n });
    }
    // combinations with λ = 0
    let lambdas = QMatrix::from_rows(vec![fields.iter().map(|f| f.h_eigenvalue().clone()).collect()]);
    let mut flat: Vec<Vec<Rational>> = Vec::new();
    for combo in lambdas.kernel_basis() {
        let mut acc = vec![Rational::zero(); n * n];
        for (c, f) in combo.iter().zip(&fields) {
            if c.is_zero() {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(f.matrix().entries()) {
                *a += c * b;
            }
        }
        flat.push(acc);
    }
    let relative: Vec<LinearDerivation> = if flat.is_empty() {
        Vec::new()
    } else {
        QMatrix::from_rows(flat)
            .row_reduce()
            .row_space()
            .into_iter()
            .map(|v| LinearDerivation::new(QMatrix::from_flat(n, n, v), Rational::zero()))
            .collect()
    };
    if relative.len() != n - 1 {
        return Err(Error::NotLinearFree(format!(
            "{} relative linear fields, expected {}",
            relative.len(),
            n - 1
        )));
    }
    for f in &relative {
        if !f.apply(h).is_zero() {
            return Err(Error::NotLinearFree("relative field does not annihilate h".into()));
        }
    }
    let euler = LinearDerivation::euler(n);
    let mut basis = vec![euler.clone()];
    basis.extend(relative.iter().cloned());
    let saito = saito_check(h, &basis)?;
    if !saito.ok {
        return Err(Error::NotLinearFree("Saito determinant is not a unit multiple of h".into()));
    }
    Ok(DivisorData { n, h: h.clone(), euler, relative_fields: relative, log_fields: fields, saito })
}

/// Lie-algebra level reductivity report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductivityReport {
    pub dimension: usize,
    pub bracket_closed: bool,
    pub center_dimension: usize,
    pub derived_dimension: usize,
    /// `g = z(g) ⊕ [g, g]`.
    pub center_derived_split: bool,
    /// Trace form `tr(XY)` nondegenerate on `[g, g]`.
    pub trace_form_nondegenerate: bool,
    /// Trace form nondegenerate on the center (fails for nilpotent centers).
    pub center_semisimple: bool,
    pub reductive: bool,
    pub caveat: String,
}

const PROXY_CAVEAT: &str = "Lie-algebra proxy: certifies the Lie algebra of the linear \
logarithmic fields, not the symmetry group itself";

fn gram_nondegenerate(basis: &[QMatrix]) -> bool {
    if basis.is_empty() {
        return true;
    }
    let k = basis.len();
    let mut g = QMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            g[(a, b)] = (&basis[a] * &basis[b]).trace();
        }
    }
    !g.determinant().expect("square").is_zero()
}

pub fn reductivity_probe(fields: &[LinearDerivation]) -> Result<ReductivityReport> {
    let Some(first) = fields.first() else {
        return Err(Error::InvalidInput("no fields supplied".into()));
    };
    let n = first.dim();
    let flat: Vec<Vec<Rational>> = fields.iter().map(|f| f.matrix().entries().to_vec()).collect();
    let basis: Vec<QMatrix> = QMatrix::from_rows(flat)
        .row_reduce()
        .row_space()
        .into_iter()
        .map(|v| QMatrix::from_flat(n, n, v))
        .collect();
    let m = basis.len();
    let span: Vec<Vec<Rational>> = basis.iter().map(|b| b.entries().to_vec()).collect();

    let mut brackets: Vec<Vec<Rational>> = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let c = basis[a].commutator(&basis[b]);
            if !c.is_zero() {
                brackets.push(c.entries().to_vec());
            }
        }
    }
    let mut with_brackets = span.clone();
    with_brackets.extend(brackets.iter().cloned());
    if span_rank(&with_brackets) != m {
        return Err(Error::NotClosed);
    }

    // center: Σ c_k [B_k, B_l] = 0 for every l
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for l in 0..m {
        let comms: Vec<QMatrix> = (0..m).map(|k| basis[k].commutator(&basis[l])).collect();
        for e in 0..n * n {
            rows.push(comms.iter().map(|c| c.entries()[e].clone()).collect());
        }
    }
    let center_coeffs = if m == 0 { Vec::new() } else { QMatrix::from_rows(rows).kernel_basis() };
    let center: Vec<QMatrix> = center_coeffs
        .iter()
        .map(|c| {
            let mut acc = QMatrix::zeros(n, n);
            for (ck, bk) in c.iter().zip(&basis) {
                acc = acc.add(&bk.scale(ck));
            }
            acc
        })
        .collect();
    let derived: Vec<QMatrix> = if brackets.is_empty() {
        Vec::new()
    } else {
        QMatrix::from_rows(brackets)
            .row_reduce()
            .row_space()
            .into_iter()
            .map(|v| QMatrix::from_flat(n, n, v))
            .collect()
    };
    let mut joint: Vec<Vec<Rational>> = center.iter().map(|c| c.entries().to_vec()).collect();
    joint.extend(derived.iter().map(|d| d.entries().to_vec()));
    let split = center.len() + derived.len() == m && span_rank(&joint) == m;
    let trace_form = gram_nondegenerate(&derived);
    let center_semisimple = gram_nondegenerate(&center);
    Ok(ReductivityReport {
        dimension: m,
        bracket_closed: true,
        center_dimension: center.len(),
        derived_dimension: derived.len(),
        center_derived_split: split,
        trace_form_nondegenerate: trace_form,
        center_semisimple,
        reductive: split && trace_form && center_semisimple,
        caveat: PROXY_CAVEAT.to_string(),
    })
}

/// `[ξ, E] = 0` for every linear field, as matrices.
pub fn commutes_with_euler(field: &LinearDerivation) -> bool {
    field.commutator(&LinearDerivation::euler(field.dim())).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly_str;
    use crate::exactalg::rational::int;

    fn star3() -> MPoly {
        parse_poly_str("(a*e-b*d)*(a*f-c*d)*(b*f-c*e)", &["a", "b", "c", "d", "e", "f"]).unwrap()
    }

    #[test]
    fn normal_crossing_fields() {
        let h = parse_poly_str("x*y", &["x", "y"]).unwrap();
        let fields = linear_log_fields(&h).unwrap();
        assert_eq!(fields.len(), 2);
        for f in &fields {
            assert_eq!(f.apply(&h), h.scale(f.h_eigenvalue()));
            assert!(commutes_with_euler(f));
        }
    }

    #[test]
    fn three_lines_only_euler() {
        let h = parse_poly_str("x*y*(x+y)", &["x", "y"]).unwrap();
        let fields = linear_log_fields(&h).unwrap();
        assert_eq!(fields.len(), 1);
        assert_eq!(fields[0].normalized().matrix(), &QMatrix::identity(2));
    }

    #[test]
    fn star3_fields() {
        let h = star3();
        let fields = linear_log_fields(&h).unwrap();
        assert!(fields.len() >= 6);
        let d = build_divisor(&h).unwrap();
        assert_eq!(d.relative_fields.len(), 5);
        assert!(d.saito.ok);
    }

    #[test]
    fn saito_normal_crossing() {
        let h = parse_poly_str("x*y", &["x", "y"]).unwrap();
        let fx = LinearDerivation::new(QMatrix::from_i64(&[&[1, 0], &[0, 0]]), int(1));
        let fy = LinearDerivation::new(QMatrix::from_i64(&[&[0, 0], &[0, 1]]), int(1));
        let cert = saito_check(&h, &[fx, fy]).unwrap();
        assert!(cert.ok);
        assert_eq!(cert.unit, int(1));
    }

    #[test]
    fn saito_wrong_count() {
        let h = parse_poly_str("x*y*(x+y)", &["x", "y"]).unwrap();
        let fields = linear_log_fields(&h).unwrap();
        assert_eq!(
            saito_check(&h, &fields).unwrap_err(),
            Error::WrongCount { expected: 2, got: 1 }
        );
    }

    #[test]
    fn build_base_cases() {
        let h = parse_poly_str("x", &["x"]).unwrap();
        let d = build_divisor(&h).unwrap();
        assert!(d.relative_fields.is_empty());
        assert!(d.saito.ok);

        let h = parse_poly_str("x*y", &["x", "y"]).unwrap();
        let d = build_divisor(&h).unwrap();
        assert_eq!(d.relative_fields.len(), 1);
        let m = d.relative_fields[0].matrix();
        assert_eq!(m, &QMatrix::from_i64(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn build_rejections() {
        let h = parse_poly_str("x*y*(x+y)", &["x", "y"]).unwrap();
        assert!(matches!(build_divisor(&h), Err(Error::NotLinearFree(_))));
        let h = parse_poly_str("x*y", &["x", "y", "z"]).unwrap();
        assert!(matches!(build_divisor(&h), Err(Error::DegreeMismatch { degree: 2, nvars: 3 })));
        let h = parse_poly_str("x^2+y", &["x", "y"]).unwrap();
        assert_eq!(build_divisor(&h).unwrap_err(), Error::NotHomogeneous);
    }

    #[test]
    fn torus_is_reductive() {
        let h = parse_poly_str("x*y*z", &["x", "y", "z"]).unwrap();
        let r = reductivity_probe(&linear_log_fields(&h).unwrap()).unwrap();
        assert!(r.reductive);
        assert_eq!(r.center_dimension, 3);
        assert_eq!(r.derived_dimension, 0);
    }

    #[test]
    fn star3_is_reductive() {
        let r = reductivity_probe(&linear_log_fields(&star3()).unwrap()).unwrap();
        assert!(r.bracket_closed);
        assert!(r.reductive, "{r:?}");
        assert_eq!(r.dimension, 6);
        assert_eq!(r.derived_dimension, 3);
    }

    #[test]
    fn nilpotent_not_reductive() {
        let e = |i: usize, j: usize| {
            let mut m = QMatrix::zeros(3, 3);
            m[(i, j)] = int(1);
            LinearDerivation::new(m, int(0))
        };
        let r = reductivity_probe(&[e(0, 1), e(0, 2), e(1, 2)]).unwrap();
        assert!(!r.reductive);
        assert!(!r.center_derived_split);
        let r = reductivity_probe(&[e(0, 1)]).unwrap();
        assert!(!r.reductive);
        assert!(!r.center_semisimple);
    }

    #[test]
    fn not_closed() {
        let a = LinearDerivation::new(QMatrix::from_i64(&[&[0, 1], &[0, 0]]), int(0));
        let b = LinearDerivation::new(QMatrix::from_i64(&[&[0, 0], &[1, 0]]), int(0));
        assert_eq!(reductivity_probe(&[a, b]).unwrap_err(), Error::NotClosed);
    }
}
