//! The full pipeline behind `lfd report`.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::bfunctional::{bernstein_via_functional, Verification};
use crate::brieskorn::{analyze, corner_constant, LatticeAnalysis, Spectrum, TheoremChecks};
use crate::catalog::{catalog, DivisorSpecFile};
use crate::defalg::{canonical_generic_form, FormChoice, GenericityReport, PairData};
use crate::error::{Error, ErrorClass, Result};
use crate::exactalg::rational::{self, int};
use crate::exactalg::{BPoly, MPoly, RootFactor};
use crate::freediv::{build_divisor, reductivity_probe, DivisorData, ReductivityReport};

/// Monomial count `C(2n-1, n)` of the largest linear system.
pub fn size_estimate(n: usize) -> u128 {
    let (top, k) = ((2 * n).saturating_sub(1) as u128, n as u128);
    (0..k).fold(1u128, |acc, i| acc * (top - i) / (i + 1))
}

/// Largest estimate accepted without `--allow-large`.
pub const DEFAULT_SIZE_LIMIT: u128 = 1_000;
/// Largest estimate accepted at all.
pub const HARD_SIZE_LIMIT: u128 = 50_000;

pub fn check_size(n: usize, allow_large: bool) -> Result<()> {
    let est = size_estimate(n);
    if est > HARD_SIZE_LIMIT {
        return Err(Error::TooLarge(format!("{est} monomials in degree {n} exceeds the hard limit {HARD_SIZE_LIMIT}")));
    }
    if est > DEFAULT_SIZE_LIMIT && !allow_large {
        return Err(Error::TooLarge(format!("{est} monomials in degree {n}; rerun with --allow-large")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub allow_large: bool,
    /// Route disagreement and functional failures become hard failures.
    pub verify: bool,
    pub timings: bool,
    pub functional: Verification,
}

impl Default for Options {
    fn default() -> Self {
        Options { allow_large: false, verify: false, timings: false, functional: Verification::Exact }
    }
}

/// Looks `arg` up in the catalog, or reads it as a JSON file.
pub fn resolve_spec(arg: &str) -> Result<DivisorSpecFile> {
    match catalog(arg) {
        Ok(spec) => Ok(spec),
        Err(Error::UnknownCatalogEntry(name)) => {
            let path = std::path::Path::new(arg);
            if !path.exists() {
                return Err(Error::UnknownCatalogEntry(name));
            }
            let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{arg}: {e}")))?;
            DivisorSpecFile::from_json(&text)
        }
        Err(e) => Err(e),
    }
}

/// Divisor, chosen form and pair, shared by all commands.
#[derive(Debug)]
pub struct Prepared {
    pub spec: DivisorSpecFile,
    pub h: MPoly,
    pub operator: Option<crate::bfunctional::DualOperator>,
    pub pair: PairData,
    pub form: FormRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormRecord {
    pub f: String,
    /// `"supplied"` or the search strategy.
    pub strategy: String,
    pub attempts: usize,
    pub genericity: GenericityReport,
}

pub fn prepare(spec: &DivisorSpecFile, allow_large: bool) -> Result<Prepared> {
    let parsed = spec.parse()?;
    check_size(parsed.h.nvars(), allow_large)?;
    let divisor = build_divisor(&parsed.h)?;
    let (f, choice) = match parsed.f {
        Some(f) => (f, FormChoice { strategy: "supplied".into(), attempts: 1 }),
        None => canonical_generic_form(&divisor)?,
    };
    let pair = PairData::generic(divisor, f)?;
    let form = FormRecord {
        f: pair.f.display(&spec.variables).to_string(),
        strategy: choice.strategy,
        attempts: choice.attempts,
        genericity: pair.genericity.clone(),
    };
    Ok(Prepared { spec: spec.clone(), h: parsed.h, operator: parsed.operator, pair, form })
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorMeta {
    pub name: String,
    pub variables: Vec<String>,
    pub h: String,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Freeness {
    pub saito_ok: bool,
    #[serde(with = "rational::serde_rational")]
    pub saito_unit: rational::Rational,
    pub log_field_dimension: usize,
    pub relative_fields: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalFormRecord {
    #[serde(with = "rational::serde_rational")]
    pub c: rational::Rational,
    /// Corner entry of the normal form matrix, `(-1)^n c`.
    #[serde(with = "rational::serde_rational")]
    pub corner: rational::Rational,
    pub k: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionRecord {
    #[serde(with = "rational::serde_rational_vec")]
    pub alpha: Vec<rational::Rational>,
    #[serde(with = "rational::serde_rational")]
    pub c_from_f: rational::Rational,
    pub residue: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BernsteinRecord {
    pub spectral: Option<Vec<RootFactor>>,
    pub spectral_text: Option<String>,
    pub functional: Option<Vec<RootFactor>>,
    pub functional_text: Option<String>,
    /// Leading coefficient of `B(s)` from the operator, before normalising.
    pub functional_leading_constant: Option<String>,
    pub functional_operator: String,
    pub functional_error: Option<ErrorRecord>,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectraRecord {
    pub zero: Spectrum,
    pub infinity: Spectrum,
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicRecord {
    pub holds: bool,
    /// `(b, e, value)` with `value` the coefficient of `t^b e_(e+1)`.
    pub residual: Vec<(u32, u32, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorRecord {
    pub module: String,
    pub code: String,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord { module: e.module().into(), code: e.code().into(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub divisor: DivisorMeta,
    pub freeness: Freeness,
    pub reductivity: std::result::Result<ReductivityReport, ErrorRecord>,
    pub form: FormRecord,
    pub normal_form: NormalFormRecord,
    pub connection: ConnectionRecord,
    pub bernstein: BernsteinRecord,
    pub spectra: SpectraRecord,
    pub cyclic: CyclicRecord,
    pub elementary_exact: bool,
    pub checks: TheoremChecks,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl Report {
    /// Hard checks; the conjecture and `agree` outside `--verify` are soft.
    pub fn hard_checks_pass(&self, verify: bool) -> bool {
        self.checks.all_hold()
            && self.cyclic.holds
            && self.elementary_exact
            && self.freeness.saito_ok
            && (!verify || self.bernstein.agree)
    }

    /// 0 when every hard check passes, 2 otherwise.
    pub fn exit_code(&self, verify: bool) -> i32 {
        if self.hard_checks_pass(verify) {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Exit code for an error: 2 check failure, 3 bad input, 4 out of scope.
pub fn error_exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Check => 2,
        ErrorClass::Input => 3,
        ErrorClass::OutOfScope => 4,
    }
}

fn matrix_strings(m: &crate::exactalg::QMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(rational::to_string).collect()).collect()
}

fn divisor_records(spec: &DivisorSpecFile, h: &MPoly, d: &DivisorData) -> (DivisorMeta, Freeness) {
    (
        DivisorMeta { name: spec.name.clone(), variables: spec.variables.clone(), h: h.display(&spec.variables).to_string(), n: d.n },
        Freeness {
            saito_ok: d.saito.ok,
            saito_unit: d.saito.unit.clone(),
            log_field_dimension: d.log_fields.len(),
            relative_fields: d.relative_fields.len(),
        },
    )
}

/// Runs the functional route with the supplied operator or `h(∂)`.
pub fn functional_route(prep: &Prepared, verification: Verification) -> Result<crate::bfunctional::Extracted> {
    bernstein_via_functional(&prep.h, prep.operator.as_ref(), verification)
}

pub fn run_report(spec: &DivisorSpecFile, options: &Options) -> Result<Report> {
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let mut lap = |name: &str, t: &mut Instant| {
        timings.insert(name.to_string(), t.elapsed().as_millis());
        *t = Instant::now();
    };
    let mut t = Instant::now();
    let prep = prepare(spec, options.allow_large)?;
    lap("prepare", &mut t);
    let d = &prep.pair.divisor;
    let reductivity = reductivity_probe(&d.log_fields).map_err(|e| ErrorRecord::from(&e));
    lap("reductivity", &mut t);
    let analysis: LatticeAnalysis = analyze(&prep.pair)?;
    lap("lattice", &mut t);
    let functional = functional_route(&prep, options.functional);
    lap("functional", &mut t);
    if let (true, Err(e)) = (options.verify, &functional) {
        return Err(e.clone());
    }

    let n = prep.pair.n();
    let mut warnings = analysis.normal_form.warnings.clone();
    if !analysis.checks.conjecture_zero_symmetric {
        warnings.push("theta=0 spectrum is not symmetric about (n-1)/2".into());
    }
    if !analysis.c_consistent {
        warnings.push("normal-form constant differs from the connection corner".into());
    }
    if let Err(e) = &reductivity {
        warnings.push(format!("reductivity probe: {}", e.message));
    } else if let Ok(r) = &reductivity {
        if !r.reductive {
            warnings.push("symmetry Lie algebra does not look reductive".into());
        }
    }
    let (divisor, freeness) = divisor_records(&prep.spec, &prep.h, d);
    let b_text = |b: &BPoly| b.to_string();
    let bernstein = match &functional {
        Ok(x) => BernsteinRecord {
            spectral: Some(analysis.b_h.factors().to_vec()),
            spectral_text: Some(b_text(&analysis.b_h)),
            functional: Some(x.b.factors().to_vec()),
            functional_text: Some(b_text(&x.b)),
            functional_leading_constant: Some(rational::to_string(&x.leading_constant)),
            functional_operator: if prep.operator.is_some() { "supplied".into() } else { "h(d)".into() },
            functional_error: None,
            agree: x.b == analysis.b_h,
        },
        Err(e) => {
            warnings.push(format!("functional route: {e}"));
            BernsteinRecord {
                spectral: Some(analysis.b_h.factors().to_vec()),
                spectral_text: Some(b_text(&analysis.b_h)),
                functional: None,
                functional_text: None,
                functional_leading_constant: None,
                functional_operator: if prep.operator.is_some() { "supplied".into() } else { "h(d)".into() },
                functional_error: Some(ErrorRecord::from(e)),
                agree: false,
            }
        }
    };
    let report = Report {
        divisor,
        freeness,
        reductivity,
        form: prep.form.clone(),
        normal_form: NormalFormRecord {
            c: analysis.normal_form.c.clone(),
            corner: corner_constant(n, &analysis.normal_form.c),
            k: analysis.normal_form.k.iter().map(|k| k.display(&prep.spec.variables).to_string()).collect(),
        },
        connection: ConnectionRecord {
            alpha: analysis.connection.alpha.clone(),
            c_from_f: analysis.connection.c_from_f.clone(),
            residue: matrix_strings(&analysis.connection.residue),
        },
        bernstein,
        spectra: SpectraRecord { zero: analysis.spectrum_zero.clone(), infinity: analysis.spectrum_infinity.clone() },
        cyclic: CyclicRecord {
            holds: analysis.cyclic.holds,
            residual: analysis.cyclic.residual.iter().map(|(&(b, e), v)| (b, e, rational::to_string(v))).collect(),
        },
        elementary_exact: analysis.elementary.exact,
        checks: analysis.checks.clone(),
        warnings,
        timings_ms: options.timings.then(|| {
            let mut t = timings;
            t.insert("total".into(), start.elapsed().as_millis());
            t
        }),
    };
    Ok(report)
}

/// Startup self-test pinning the sign and strictness conventions:
/// `A_1 -> (s+1)` and `A_3` spectra `(0,1,2)` at both ends.
pub fn calibrate() -> Result<()> {
    let fail = |what: &str| Err(Error::CalibrationFailed(what.to_string()));
    let a1 = analyze(&prepare(&catalog("A1")?, false)?.pair)?;
    if a1.b_h != BPoly::from_roots(&[(int(-1), 1)]) || !a1.cyclic.holds {
        return fail("A1");
    }
    let a3 = analyze(&prepare(&catalog("A3")?, false)?.pair)?;
    let expected = Spectrum::from_integers(&[0, 1, 2]);
    if a3.spectrum_zero != expected || a3.spectrum_infinity != expected || !a3.cyclic.holds {
        return fail("A3");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_estimates() {
        assert_eq!(size_estimate(1), 1);
        assert_eq!(size_estimate(2), 3);
        assert_eq!(size_estimate(6), 462);
        assert_eq!(size_estimate(12), 1_352_078);
        assert!(check_size(6, false).is_ok());
        assert!(matches!(check_size(7, false), Err(Error::TooLarge(_))));
        assert!(check_size(7, true).is_ok());
        assert!(matches!(check_size(12, true), Err(Error::TooLarge(_))));
    }

    #[test]
    fn calibration_passes() {
        calibrate().unwrap();
    }

    #[test]
    fn a2_report() {
        let r = run_report(&catalog("A2").unwrap(), &Options { verify: true, ..Options::default() }).unwrap();
        assert_eq!(r.bernstein.spectral_text.as_deref(), Some("(s+1)^2"));
        assert!(r.bernstein.agree);
        assert_eq!(r.exit_code(true), 0);
        assert!(r.timings_ms.is_none());
        let json = r.to_json();
        assert!(json.contains("\"c\": \"-4\""));
        assert_eq!(json, run_report(&catalog("A2").unwrap(), &Options::default()).unwrap().to_json());
    }

    #[test]
    fn error_codes() {
        assert_eq!(error_exit_code(&Error::NotProportional("x".into())), 4);
        assert_eq!(error_exit_code(&Error::NotLinearFree("x".into())), 3);
        assert_eq!(error_exit_code(&Error::WindowUnstable(3)), 2);
    }
}
