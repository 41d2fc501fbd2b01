//! Built-in divisors and the JSON input format.

use serde::{Deserialize, Serialize};

use crate::bfunctional::DualOperator;
use crate::error::{Error, Result};
use crate::exactalg::rational::int;
use crate::exactalg::{parse_poly, MPoly, Rational};
use crate::freediv::poly_determinant;

/// A divisor as read from a file or produced by [`catalog`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpecFile {
    pub name: String,
    pub variables: Vec<String>,
    pub h: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    /// Operator in the symbols `d<var>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<String>,
}

/// Parsed form of a [`DivisorSpecFile`].
#[derive(Clone, Debug)]
pub struct ParsedSpec {
    pub h: MPoly,
    pub f: Option<MPoly>,
    pub operator: Option<DualOperator>,
}

impl DivisorSpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }

    pub fn operator_symbols(&self) -> Vec<String> {
        self.variables.iter().map(|v| format!("d{v}")).collect()
    }

    pub fn parse(&self) -> Result<ParsedSpec> {
        if self.variables.is_empty() {
            return Err(Error::InvalidInput("no variables".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.variables {
            let valid = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || !seen.insert(v) {
                return Err(Error::InvalidInput(format!("bad or repeated variable name `{v}`")));
            }
        }
        let h = parse_poly(&self.h, &self.variables)?;
        let f = self.f.as_deref().map(|t| parse_poly(t, &self.variables)).transpose()?;
        let operator = self
            .operator
            .as_deref()
            .map(|t| parse_poly(t, &self.operator_symbols()).map(DualOperator::new))
            .transpose()?;
        Ok(ParsedSpec { h, f, operator })
    }
}

/// Names accepted by [`catalog`]; `A<n>` works for every `n >= 1`.
pub const CATALOG_NAMES: &[&str] = &["A1", "A2", "A3", "A4", "A5", "A6", "star3", "bracelet", "star4"];

/// Entries only run with `--allow-large`, if at all.
pub const STRETCH_NAMES: &[&str] = &["star4"];

pub fn catalog(name: &str) -> Result<DivisorSpecFile> {
    if let Some(n) = name.strip_prefix('A').and_then(|s| s.parse::<usize>().ok()) {
        if n >= 1 {
            return Ok(normal_crossing(n));
        }
    }
    match name {
        "star3" => Ok(star(3)),
        "star4" => Ok(star(4)),
        "bracelet" => bracelet(),
        _ => Err(Error::UnknownCatalogEntry(name.to_string())),
    }
}

fn normal_crossing(n: usize) -> DivisorSpecFile {
    let variables: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    DivisorSpecFile { name: format!("A{n}"), h: variables.join("*"), variables, f: None, operator: None }
}

/// `m` vectors in `C^(m-1)`; `h` is the product of the maximal minors that
/// omit one vector each.
fn star(m: usize) -> DivisorSpecFile {
    let rows = m - 1;
    let letters = "abcdefghijklmnopqrstuvwxyz".chars().collect::<Vec<_>>();
    // entry (r, c) of the rows x m matrix, named row-major
    let name = |r: usize, c: usize| -> String {
        let k = r * m + c;
        if m * rows <= letters.len() {
            letters[k].to_string()
        } else {
            format!("x{}", k + 1)
        }
    };
    let variables: Vec<String> = (0..rows).flat_map(|r| (0..m).map(move |c| (r, c))).map(|(r, c)| name(r, c)).collect();
    let factors: Vec<String> = (0..m)
        .rev()
        .map(|skip| {
            let cols: Vec<usize> = (0..m).filter(|&c| c != skip).collect();
            format!("({})", leibniz(rows, &|r, i| name(r, cols[i])))
        })
        .collect();
    DivisorSpecFile { name: format!("star{m}"), variables, h: factors.join("*"), f: None, operator: None }
}

/// Leibniz expansion of a `k x k` determinant as text.
fn leibniz(k: usize, entry: &dyn Fn(usize, usize) -> String) -> String {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut terms = Vec::new();
    permutations(&mut perm, 0, &mut |p| {
        let inversions = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let body: Vec<String> = (0..k).map(|r| entry(r, p[r])).collect();
        terms.push(format!("{}{}", if inversions % 2 == 0 { "+" } else { "-" }, body.join("*")));
    });
    let text = terms.concat();
    text.strip_prefix('+').unwrap_or(&text).to_string()
}

fn permutations(p: &mut Vec<usize>, at: usize, visit: &mut dyn FnMut(&[usize])) {
    if at == p.len() {
        visit(p);
        return;
    }
    for i in at..p.len() {
        p.swap(at, i);
        permutations(p, at + 1, visit);
        p.swap(at, i);
    }
}

const BRACELET_VARS: [&str; 4] = ["a", "b", "c", "d"];

/// The typed textbook formula, used only as a cross-check.
pub const BRACELET_TEXTBOOK: &str = "27*a^2*d^2 - 18*a*b*c*d + 4*a*c^3 + 4*b^3*d - b^2*c^2";

/// Discriminant of `a x^3 + b x^2 y + c x y^2 + d y^3` as the resultant of
/// its two partial derivatives, scaled to a primitive integer polynomial with
/// positive `a^2 d^2` coefficient.
pub fn binary_cubic_discriminant() -> MPoly {
    let vars: Vec<String> = BRACELET_VARS.iter().map(|s| s.to_string()).collect();
    let v = |i: usize| MPoly::var(4, i);
    let k = |c: i64, p: MPoly| p.scale(&int(c));
    let zero = MPoly::zero(4);
    // F_x = 3a x^2 + 2b xy + c y^2, F_y = b x^2 + 2c xy + 3d y^2
    let p = [k(3, v(0)), k(2, v(1)), v(2)];
    let q = [v(1), k(2, v(2)), k(3, v(3))];
    let sylvester = vec![
        vec![p[0].clone(), p[1].clone(), p[2].clone(), zero.clone()],
        vec![zero.clone(), p[0].clone(), p[1].clone(), p[2].clone()],
        vec![q[0].clone(), q[1].clone(), q[2].clone(), zero.clone()],
        vec![zero.clone(), q[0].clone(), q[1].clone(), q[2].clone()],
    ];
    let res = poly_determinant(&sylvester, 4);
    let a2d2 = parse_poly("a^2*d^2", &vars).expect("valid").leading().expect("monomial").0.clone();
    let lead = res.coeff(&a2d2);
    let content = res
        .terms()
        .map(|(_, c)| c.numer().clone())
        .fold(num_bigint::BigInt::from(0), |acc, x| num_integer::Integer::gcd(&acc, &x));
    let mut scale = Rational::from_integer(content);
    if lead < Rational::from_integer(0.into()) {
        scale = -scale;
    }
    res.scale(&(Rational::from_integer(1.into()) / scale))
}

fn bracelet() -> Result<DivisorSpecFile> {
    let vars: Vec<String> = BRACELET_VARS.iter().map(|s| s.to_string()).collect();
    let h = binary_cubic_discriminant();
    let textbook = parse_poly(BRACELET_TEXTBOOK, &vars)?;
    if h != textbook {
        return Err(Error::InvalidInput("resultant disagrees with the discriminant formula".into()));
    }
    // unitary coordinates: a, b/√3, c/√3, d, hence h(∂_a, 3∂_b, 3∂_c, ∂_d)
    let scales = [int(1), int(3), int(3), int(1)];
    let op_names: Vec<String> = vars.iter().map(|v| format!("d{v}")).collect();
    let operator = h.rescale_vars(&scales).display(&op_names).to_string();
    Ok(DivisorSpecFile {
        name: "bracelet".into(),
        h: h.display(&vars).to_string(),
        variables: vars,
        f: None,
        operator: Some(operator),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly_str;
    use crate::freediv::build_divisor;

    #[test]
    fn normal_crossing_entries() {
        let s = catalog("A2").unwrap();
        assert_eq!(s.variables, vec!["x1", "x2"]);
        assert_eq!(s.parse().unwrap().h, parse_poly_str("x1*x2", &["x1", "x2"]).unwrap());
        assert_eq!(catalog("A9").unwrap().variables.len(), 9);
        assert!(matches!(catalog("A0"), Err(Error::UnknownCatalogEntry(_))));
        assert!(matches!(catalog("E6"), Err(Error::UnknownCatalogEntry(_))));
    }

    #[test]
    fn star3_entry() {
        let s = catalog("star3").unwrap();
        let h = s.parse().unwrap().h;
        let vars = ["a", "b", "c", "d", "e", "f"];
        assert_eq!(s.variables, vars);
        let expected = parse_poly_str("(a*e-b*d)*(a*f-c*d)*(b*f-c*e)", &vars).unwrap();
        assert!(h == expected || h == -&expected);
        assert_eq!(h.degree(), Some(6));
    }

    #[test]
    fn star4_entry() {
        let s = catalog("star4").unwrap();
        let h = s.parse().unwrap().h;
        assert_eq!(h.nvars(), 12);
        assert_eq!(h.degree(), Some(12));
        assert!(h.is_homogeneous());
    }

    #[test]
    fn bracelet_entry() {
        let s = catalog("bracelet").unwrap();
        let parsed = s.parse().unwrap();
        assert_eq!(parsed.h, parse_poly_str(BRACELET_TEXTBOOK, &BRACELET_VARS).unwrap());
        let d = build_divisor(&parsed.h).unwrap();
        assert!(d.saito.ok);
        assert_eq!(parsed.operator.unwrap().order(), 4);
    }

    #[test]
    fn json_roundtrip() {
        let s = catalog("bracelet").unwrap();
        assert_eq!(DivisorSpecFile::from_json(&s.to_json()).unwrap(), s);
        assert!(matches!(DivisorSpecFile::from_json("{\"name\": 1}"), Err(Error::InvalidInput(_))));
        let bad = DivisorSpecFile { name: "x".into(), variables: vec!["x".into(), "x".into()], h: "x".into(), f: None, operator: None };
        assert!(matches!(bad.parse(), Err(Error::InvalidInput(_))));
    }
}
