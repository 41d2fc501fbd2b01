use lfd_core::brieskorn::{analyze, f_independence_check};
use lfd_core::catalog::{catalog, DivisorSpecFile};
use lfd_core::exactalg::parse_poly_str;
use lfd_core::exactalg::rational::int;
use lfd_core::freediv::{build_divisor, reductivity_probe};
use lfd_core::report::{prepare, run_report, Options};
use lfd_core::Error;

fn spec(name: &str, vars: &[&str], h: &str) -> DivisorSpecFile {
    DivisorSpecFile {
        name: name.into(),
        variables: vars.iter().map(|v| v.to_string()).collect(),
        h: h.into(),
        f: None,
        operator: None,
    }
}

#[test]
fn a2_default_report() {
    let r = run_report(&catalog("A2").unwrap(), &Options::default()).unwrap();
    assert_eq!(r.bernstein.spectral_text.as_deref(), Some("(s+1)^2"));
    assert_eq!(r.spectra.zero.to_string(), "(0,1)");
    assert_eq!(r.spectra.infinity.to_string(), "(0,1)");
    assert!(r.checks.all_hold() && r.checks.conjecture_zero_symmetric);
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
}

#[test]
fn star3_normal_form() {
    let r = run_report(&catalog("star3").unwrap(), &Options::default()).unwrap();
    assert_eq!(r.form.strategy, "sum of i*x_i");
    assert_eq!(r.normal_form.c, int(93312));
    assert_eq!(r.checks.integer_block, Some(1));
    assert_eq!(r.spectra.zero.to_string(), "(-2,1,2,3,4,7)");
    assert!(r.reductivity.as_ref().unwrap().reductive);
}

#[test]
fn not_linear_free() {
    let e = run_report(&spec("xy(x+y)", &["x", "y"], "x*y*(x+y)"), &Options::default()).unwrap_err();
    assert!(matches!(e, Error::NotLinearFree(_)), "{e:?}");
}

#[test]
fn star3_forms_agree() {
    let prep = prepare(&catalog("star3").unwrap(), false).unwrap();
    let vars = ["a", "b", "c", "d", "e", "f"];
    let other = parse_poly_str("2*a - b + 3*c + d - 2*e + 5*f", &vars).unwrap();
    let r = f_independence_check(&prep.pair.divisor, &prep.pair.f, &other).unwrap();
    assert!(r.equal);
    assert_ne!(r.c.0, r.c.1);
}

#[test]
fn normal_crossing_in_disguise() {
    // x*y*z after a unimodular change of coordinates.
    let s = spec("nc", &["x", "y", "z"], "x*(x+y)*(x+y+z)");
    let prep = prepare(&s, false).unwrap();
    let a = analyze(&prep.pair).unwrap();
    assert_eq!(a.b_h.to_string(), "(s+1)^3");
    assert_eq!(a.spectrum_infinity.to_string(), "(0,1,2)");
    assert!(a.cyclic.holds);
    assert!(reductivity_probe(&prep.pair.divisor.log_fields).unwrap().reductive);
}

#[test]
fn bracelet_is_free() {
    let spec = catalog("bracelet").unwrap();
    let d = build_divisor(&spec.parse().unwrap().h).unwrap();
    assert!(d.saito.ok);
    assert_eq!(d.relative_fields.len(), 3);
}
