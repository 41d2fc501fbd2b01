//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lfd_core::brieskorn::{
    f_independence_check, graded_dimension, graded_dimension_prediction, rule_residual, Spectrum,
};
use lfd_core::catalog::{catalog, BRACELET_TEXTBOOK, CATALOG_NAMES, STRETCH_NAMES};
use lfd_core::defalg::PairData;
use lfd_core::exactalg::rational::{int, rat};
use lfd_core::exactalg::{monomial_basis, parse_poly_str, BPoly, MPoly, Rational};
use lfd_core::report::{prepare, run_report, Options, Prepared, Report};

const SEED: u64 = 0x00ac_ce97;
const CASES: usize = 100;

fn names() -> Vec<&'static str> {
    CATALOG_NAMES.iter().copied().filter(|n| !STRETCH_NAMES.contains(n)).collect()
}

fn b_poly(roots: &[(Rational, u32)]) -> BPoly {
    BPoly::from_roots(roots)
}

fn spectrum(v: &[Rational]) -> Spectrum {
    Spectrum::new(v.to_vec())
}

struct Run {
    report: Report,
    elapsed: Duration,
}

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, detail: String::new() }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }
}

fn same_b(r: &Report, expected: &BPoly) -> bool {
    let e = Some(expected.factors().to_vec());
    r.bernstein.spectral == e && r.bernstein.functional == e && r.bernstein.agree
}

fn criterion_an(runs: &BTreeMap<&str, Run>) -> Outcome {
    let mut o = Outcome::new();
    for n in 1..=6u32 {
        let name = format!("A{n}");
        let run = &runs[name.as_str()];
        o.require(same_b(&run.report, &b_poly(&[(int(-1), n)])), format!("{name}: b = {:?}", run.report.bernstein.spectral_text));
        o.require(run.elapsed < Duration::from_secs(5), format!("{name}: {:?}", run.elapsed));
    }
    o
}

fn criterion_star3(runs: &BTreeMap<&str, Run>) -> Outcome {
    let mut o = Outcome::new();
    let run = &runs["star3"];
    let expected = b_poly(&[(rat(-4, 3), 1), (int(-1), 4), (rat(-2, 3), 1)]);
    o.require(same_b(&run.report, &expected), format!("b = {:?}", run.report.bernstein.functional_text));
    o.require(run.elapsed < Duration::from_secs(60), format!("{:?}", run.elapsed));
    o
}

fn criterion_bracelet(runs: &BTreeMap<&str, Run>) -> Outcome {
    let mut o = Outcome::new();
    let run = &runs["bracelet"];
    let spec = catalog("bracelet").unwrap();
    let vars: Vec<&str> = spec.variables.iter().map(String::as_str).collect();
    let h = spec.parse().unwrap().h;
    o.require(h == parse_poly_str(BRACELET_TEXTBOOK, &vars).unwrap(), "resultant differs from the discriminant");
    o.require(run.report.freeness.saito_ok, "Saito check");
    let expected = b_poly(&[(rat(-7, 6), 1), (int(-1), 2), (rat(-5, 6), 1)]);
    o.require(same_b(&run.report, &expected), format!("b = {:?}", run.report.bernstein.functional_text));
    o.require(run.elapsed < Duration::from_secs(30), format!("{:?}", run.elapsed));
    o
}

fn criterion_zero(runs: &BTreeMap<&str, Run>) -> Outcome {
    let mut o = Outcome::new();
    for n in 1..=6i64 {
        let name = format!("A{n}");
        let sp = &runs[name.as_str()].report.spectra.zero;
        o.require(*sp == Spectrum::from_integers(&(0..n).collect::<Vec<_>>()), format!("{name}: {sp}"));
    }
    let sp = &runs["star3"].report.spectra.zero;
    o.require(*sp == Spectrum::from_integers(&[-2, 1, 2, 3, 4, 7]), format!("star3: {sp}"));
    o
}

fn criterion_infinity(runs: &BTreeMap<&str, Run>) -> Outcome {
    let mut o = Outcome::new();
    for n in 1..=6i64 {
        let name = format!("A{n}");
        let sp = &runs[name.as_str()].report.spectra.infinity;
        o.require(*sp == Spectrum::from_integers(&(0..n).collect::<Vec<_>>()), format!("{name}: {sp}"));
    }
    let sp = &runs["star3"].report.spectra.infinity;
    o.require(*sp == Spectrum::from_integers(&[1, 2, 2, 3, 3, 4]), format!("star3: {sp}"));
    for (name, run) in runs {
        let sp = &run.report.spectra.infinity;
        let n = sp.len();
        let v = sp.values();
        let total = int(n as i64 - 1);
        o.require((0..n).all(|i| &v[i] + &v[n - 1 - i] == total), format!("{name}: {sp} not symmetric"));
    }
    let bracelet = &runs["bracelet"].report.spectra.infinity;
    o.require(*bracelet == spectrum(&[rat(2, 3), int(1), int(2), rat(7, 3)]), format!("bracelet: {bracelet}"));
    o
}

fn criterion_theorems(runs: &BTreeMap<&str, Run>) -> Outcome {
    let mut o = Outcome::new();
    for (name, run) in runs {
        let c = &run.report.checks;
        o.require(c.roots_in_interval, format!("{name}: roots outside (-2,0)"));
        o.require(c.roots_symmetric, format!("{name}: roots not symmetric"));
        o.require(c.minus_one_only_integer_root, format!("{name}: integer roots"));
        o.require(c.integer_block.is_some(), format!("{name}: no integer block"));
        o.require(c.all_hold(), format!("{name}: {c:?}"));
    }
    o
}

fn criterion_cyclic(runs: &BTreeMap<&str, Run>) -> Outcome {
    let mut o = Outcome::new();
    for (name, run) in runs {
        o.require(run.report.cyclic.holds, format!("{name}: residual {:?}", run.report.cyclic.residual));
    }
    o
}

fn random_homogeneous(rng: &mut ChaCha8Rng, n: usize, d: u32) -> MPoly {
    let basis = monomial_basis(n, d);
    let terms = rng.gen_range(1..=basis.len().min(4));
    let mut p = MPoly::zero(n);
    for m in basis.choose_multiple(rng, terms) {
        let c = loop {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                break c;
            }
        };
        p.add_term(m.clone(), int(c));
    }
    p
}

fn random_form(rng: &mut ChaCha8Rng, n: usize) -> MPoly {
    let coeffs: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-5i64..=5))).collect();
    MPoly::linear(&coeffs)
}

fn criterion_properties(prepared: &BTreeMap<&str, Prepared>) -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();

    // Reduction rule residual, per divisor.
    for (name, prep) in prepared {
        let pair = &prep.pair;
        let fields = pair.divisor.relative_fields.len();
        if fields == 0 {
            continue;
        }
        for _ in 0..CASES {
            let d = rng.gen_range(0..=2);
            let g = random_homogeneous(&mut rng, pair.n(), d);
            let i = rng.gen_range(0..fields);
            let r = rule_residual(pair, &g, i).unwrap();
            o.require(r.is_zero(), format!("{name}: rule residual {r}"));
            *counts.entry("rule").or_default() += 1;
        }
    }

    // Graded dimensions up to n+2.
    for (name, prep) in prepared {
        let n = prep.pair.n();
        for d in 0..=(n as u32 + 2) {
            let got = graded_dimension(&prep.pair, d);
            o.require(got == graded_dimension_prediction(n, d), format!("{name}: degree {d} dimension {got}"));
            *counts.entry("graded").or_default() += 1;
        }
    }

    // Decompose then reconstruct.
    for (name, prep) in prepared {
        let pair = &prep.pair;
        for _ in 0..CASES {
            let d = rng.gen_range(0..=pair.n() as u32);
            let q = random_homogeneous(&mut rng, pair.n(), d);
            let dec = pair.decompose(&q, d).unwrap();
            let mut rebuilt = pair.basis_element(d).scale(&dec.lambda);
            for (gen, g) in pair.jacobian_gens.iter().zip(&dec.g) {
                rebuilt = &rebuilt + &(gen * g);
            }
            o.require(rebuilt == q, format!("{name}: reconstruction failed in degree {d}"));
            *counts.entry("decompose").or_default() += 1;
        }
    }

    // Independence of the linear form, round robin over the divisors.
    let order: Vec<&str> = prepared.keys().copied().collect();
    let mut tried = 0;
    while counts.get("independence").copied().unwrap_or(0) < CASES && tried < 20 * CASES {
        let name = order[tried % order.len()];
        tried += 1;
        let prep = &prepared[name];
        let f2 = random_form(&mut rng, prep.pair.n());
        if f2.is_zero() || !PairData::new(prep.pair.divisor.clone(), f2.clone()).unwrap().is_generic() {
            continue;
        }
        let r = f_independence_check(&prep.pair.divisor, &prep.pair.f, &f2).unwrap();
        o.require(r.equal, format!("{name}: form {} changes the invariants", f2.to_string_default()));
        *counts.entry("independence").or_default() += 1;
    }

    // Uniqueness of c under permuted unknowns, round robin.
    let mut canonical: BTreeMap<&str, Rational> = BTreeMap::new();
    for k in 0..CASES {
        let name = order[k % order.len()];
        let pair = &prepared[name].pair;
        let n = pair.n() as u32;
        let fn_ = pair.f.pow(n);
        let lambda = canonical.entry(name).or_insert_with(|| pair.decompose(&fn_, n).unwrap().lambda).clone();
        let mut perm: Vec<usize> = (0..pair.unknown_count(n)).collect();
        perm.shuffle(&mut rng);
        let dec = pair.decompose_with_order(&fn_, n, &perm).unwrap();
        o.require(dec.lambda == lambda, format!("{name}: c changed under a permuted solve"));
        *counts.entry("uniqueness").or_default() += 1;
    }

    for key in ["rule", "decompose", "independence", "uniqueness"] {
        let got = counts.get(key).copied().unwrap_or(0);
        o.require(got >= CASES, format!("only {got} {key} cases"));
    }
    o
}

fn cross_route(runs: &BTreeMap<&str, Run>) -> Outcome {
    let mut o = Outcome::new();
    for (name, run) in runs {
        o.require(run.report.bernstein.agree, format!("{name}: routes disagree"));
    }
    o
}

fn main() {
    let options = Options { verify: true, ..Options::default() };
    let mut runs = BTreeMap::new();
    let mut prepared = BTreeMap::new();
    for name in names() {
        let spec = catalog(name).unwrap();
        let start = Instant::now();
        let report = run_report(&spec, &options).unwrap_or_else(|e| panic!("{name}: {e}"));
        let elapsed = start.elapsed();
        println!("  {name:<9} {:>8.2?}  b = {}", elapsed, report.bernstein.spectral_text.clone().unwrap_or_default());
        runs.insert(name, Run { report, elapsed });
        prepared.insert(name, prepare(&spec, false).unwrap());
    }

    let mut properties = criterion_properties(&prepared);
    let routes = cross_route(&runs);
    properties.require(routes.ok, routes.detail);

    let results = [
        ("1 A_n Bernstein polynomials", criterion_an(&runs)),
        ("2 star3 Bernstein polynomial", criterion_star3(&runs)),
        ("3 bracelet Bernstein polynomial", criterion_bracelet(&runs)),
        ("4 spectrum at theta = 0", criterion_zero(&runs)),
        ("5 spectrum at theta = infinity", criterion_infinity(&runs)),
        ("6 theorem checks", criterion_theorems(&runs)),
        ("7 cyclic equation", criterion_cyclic(&runs)),
        ("8 property suites", properties),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        if o.ok {
            println!("criterion {name}: PASS");
        } else {
            failed += 1;
            println!("criterion {name}: FAIL ({})", o.detail);
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
