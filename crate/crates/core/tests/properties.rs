use std::sync::OnceLock;

use proptest::prelude::*;

use lfd_core::brieskorn::{reduce_poly, rule_residual};
use lfd_core::catalog::catalog;
use lfd_core::exactalg::rational::{int, rat};
use lfd_core::exactalg::sparse::{SparseColumnSolver, SparseRow};
use lfd_core::exactalg::{monomial_basis, parse_poly, BPoly, MPoly, QMatrix, Rational};
use lfd_core::report::{prepare, Prepared};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = MPoly> {
    let basis: Vec<_> = (0..=max_deg).flat_map(|d| monomial_basis(nvars, d)).collect();
    let len = basis.len();
    prop::collection::vec((0..len, small_rational()), 0..5).prop_map(move |terms| {
        MPoly::from_terms(nvars, terms.into_iter().map(|(i, c)| (basis[i].clone(), c)))
    })
}

fn homogeneous(nvars: usize, d: u32) -> impl Strategy<Value = MPoly> {
    let basis = monomial_basis(nvars, d);
    let len = basis.len();
    prop::collection::vec((0..len, -3i64..=3), 1..4).prop_map(move |terms| {
        MPoly::from_terms(nvars, terms.into_iter().map(|(i, c)| (basis[i].clone(), int(c))))
    })
}

fn bracelet() -> &'static Prepared {
    static P: OnceLock<Prepared> = OnceLock::new();
    P.get_or_init(|| prepare(&catalog("bracelet").unwrap(), false).unwrap())
}

fn a3() -> &'static Prepared {
    static P: OnceLock<Prepared> = OnceLock::new();
    P.get_or_init(|| prepare(&catalog("A3").unwrap(), false).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_laws(p in poly(3, 2), q in poly(3, 2), r in poly(3, 2)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&(&p + &q) - &q) == p);
    }

    #[test]
    fn leibniz_rule(p in poly(3, 3), q in poly(3, 3), i in 0usize..3) {
        let lhs = (&p * &q).derivative(i);
        let rhs = &(&p.derivative(i) * &q) + &(&p * &q.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_parses_back(p in poly(3, 3)) {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let text = p.display(&names).to_string();
        prop_assert_eq!(parse_poly(&text, &names).unwrap(), p);
    }

    #[test]
    fn bpoly_roundtrip(roots in prop::collection::vec((small_rational(), 1u32..3), 1..4)) {
        let b = BPoly::from_roots(&roots);
        let again = BPoly::from_poly(b.poly()).unwrap();
        prop_assert_eq!(&again, &b);
        for (r, _) in &roots {
            prop_assert!(b.poly().eval(r) == int(0));
        }
    }

    #[test]
    fn diagonal_char_poly(values in prop::collection::vec(small_rational(), 1..5)) {
        let chi = QMatrix::diag(&values).char_poly().unwrap();
        let mut roots = BPoly::from_poly(&chi).unwrap().roots();
        let mut sorted = values.clone();
        sorted.sort();
        roots.sort();
        prop_assert_eq!(roots, sorted);
    }

    #[test]
    fn sparse_matches_dense(entries in prop::collection::vec(-2i64..=2, 12), rhs in prop::collection::vec(-2i64..=2, 3)) {
        let rows: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        let a = QMatrix::from_rows(rows);
        let cols: Vec<SparseRow> = (0..4)
            .map(|j| a.column(j).into_iter().enumerate().filter(|(_, v)| *v != int(0)).collect())
            .collect();
        let b: Vec<Rational> = rhs.iter().map(|&v| int(v)).collect();
        let sparse_b: SparseRow = b.iter().cloned().enumerate().filter(|(_, v)| *v != int(0)).collect();
        let solver = SparseColumnSolver::new(&cols);
        prop_assert_eq!(solver.rank(), a.rank());
        prop_assert_eq!(solver.solve(&sparse_b), a.solve(&b));
    }

    #[test]
    fn bracelet_rule_residual(g in homogeneous(4, 2), i in 0usize..3) {
        prop_assert!(rule_residual(&bracelet().pair, &g, i).unwrap().is_empty());
    }

    #[test]
    fn bracelet_decomposition(q in homogeneous(4, 3)) {
        let pair = &bracelet().pair;
        let dec = pair.decompose(&q, 3).unwrap();
        let mut rebuilt = pair.basis_element(3).scale(&dec.lambda);
        for (gen, g) in pair.jacobian_gens.iter().zip(&dec.g) {
            rebuilt = &rebuilt + &(gen * g);
        }
        prop_assert_eq!(rebuilt, q);
    }

    #[test]
    fn reduction_is_linear(p in homogeneous(3, 3), q in homogeneous(3, 3), c in small_rational()) {
        let pair = &a3().pair;
        let mut sum = p.clone();
        sum.add_scaled(&q, &c);
        let mut expected = reduce_poly(pair, 0, &p).unwrap();
        expected.add_scaled(&reduce_poly(pair, 0, &q).unwrap(), &c);
        prop_assert_eq!(reduce_poly(pair, 0, &sum).unwrap(), expected);
    }

    #[test]
    fn reduction_is_graded(q in homogeneous(4, 5), a in 0i32..3) {
        let pair = &bracelet().pair;
        let r = reduce_poly(pair, a, &q).unwrap();
        prop_assert!(r.is_empty() || r.weighted_degree(4) == Some(5 + a as i64));
    }
}
