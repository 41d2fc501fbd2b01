use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lfd_core::bfunctional::Verification;
use lfd_core::brieskorn::{
    analyze, bernstein_via_spectral, elementary_decomposition, f_action_matrix, spectrum_at_infinity, spectrum_at_zero,
};
use lfd_core::catalog::{catalog, CATALOG_NAMES, STRETCH_NAMES};
use lfd_core::report::{
    calibrate, error_exit_code, functional_route, prepare, resolve_spec, run_report, size_estimate, ErrorRecord,
    Options,
};
use lfd_core::{Error, Result};

/// Bernstein polynomials and spectra of linear free divisors.
#[derive(Parser, Debug)]
#[command(name = "lfd", version)]
struct Cli {
    /// Accept inputs above the default size limit.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Freeness, genericity of f and the theorem checks.
    Check { input: String },
    /// Bernstein polynomial of h.
    Bernstein {
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        input: String,
    },
    /// Spectrum of the logarithmic Brieskorn lattice.
    Spectrum {
        #[arg(long, value_enum)]
        at: EndArg,
        input: String,
    },
    /// Full cross-validated report as JSON.
    Report {
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        json: Option<std::path::PathBuf>,
        /// Fail unless both Bernstein routes agree.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        timings: bool,
        /// Check the functional equation at random points only.
        #[arg(long)]
        sampled: Option<usize>,
        input: String,
    },
    /// List the built-in divisors.
    Catalog,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Spectral,
    Functional,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EndArg {
    Zero,
    Infinity,
}

fn flag(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn check(input: &str, allow_large: bool) -> Result<i32> {
    let prep = prepare(&resolve_spec(input)?, allow_large)?;
    let d = &prep.pair.divisor;
    println!("divisor    {} (n = {})", prep.spec.name, d.n);
    println!("saito      {} (unit {})", flag(d.saito.ok), d.saito.unit);
    println!("form       {} [{}]", prep.form.f, prep.form.strategy);
    println!("hilbert    {:?}", prep.form.genericity.hilbert);
    let a = analyze(&prep.pair)?;
    let c = &a.checks;
    for (name, ok) in [
        ("roots in (-2,0)", c.roots_in_interval),
        ("roots symmetric about -1", c.roots_symmetric),
        ("-1 only integer root", c.minus_one_only_integer_root),
        ("nu symmetric", c.nu_symmetric),
        ("integer block", c.integer_block.is_some()),
        ("block matches root multiplicity", c.block_matches_root_multiplicity),
        ("trace zero", c.trace_zero),
        ("shift b_h(s) = b_G1(s+1)", c.shift_consistent),
        ("residue roots", c.residue_roots_match),
        ("cyclic equation", a.cyclic.holds),
    ] {
        println!("{:<34} {}", name, flag(ok));
    }
    if let Some(k) = c.integer_block {
        println!("integer block k = {k}");
    }
    println!(
        "zero spectrum symmetric (conjecture) {}",
        if c.conjecture_zero_symmetric { "yes" } else { "no" }
    );
    Ok(if c.all_hold() && a.cyclic.holds && d.saito.ok { 0 } else { 2 })
}

fn bernstein(input: &str, method: MethodArg, allow_large: bool) -> Result<i32> {
    let prep = prepare(&resolve_spec(input)?, allow_large)?;
    let spectral = match method {
        MethodArg::Functional => None,
        _ => Some(bernstein_via_spectral(&f_action_matrix(&prep.pair)?)?),
    };
    let functional = match method {
        MethodArg::Spectral => None,
        _ => Some(functional_route(&prep, Verification::Exact)?.b),
    };
    if let Some(b) = &spectral {
        println!("spectral   {b}");
    }
    if let Some(b) = &functional {
        println!("functional {b}");
    }
    match (spectral, functional) {
        (Some(a), Some(b)) if a != b => {
            println!("routes disagree");
            Ok(2)
        }
        _ => Ok(0),
    }
}

fn spectrum(input: &str, at: EndArg, allow_large: bool) -> Result<i32> {
    let prep = prepare(&resolve_spec(input)?, allow_large)?;
    let dec = elementary_decomposition(&f_action_matrix(&prep.pair)?)?;
    let sp = match at {
        EndArg::Zero => spectrum_at_zero(&dec)?,
        EndArg::Infinity => spectrum_at_infinity(&dec)?,
    };
    println!("{sp}");
    Ok(0)
}

fn report(
    input: &str,
    json: Option<&std::path::Path>,
    verify: bool,
    timings: bool,
    sampled: Option<usize>,
    allow_large: bool,
) -> Result<i32> {
    let options = Options {
        allow_large,
        verify,
        timings,
        functional: sampled.map_or(Verification::Exact, Verification::Sampled),
    };
    let r = run_report(&resolve_spec(input)?, &options)?;
    let text = r.to_json();
    match json {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(r.exit_code(verify))
}

fn list_catalog() -> Result<i32> {
    for name in CATALOG_NAMES {
        let spec = catalog(name)?;
        let n = spec.variables.len();
        let note = if STRETCH_NAMES.contains(name) { "  (stretch)" } else { "" };
        println!("{name:<9} n = {n:<3} monomials {:<8}{note}", size_estimate(n));
    }
    Ok(0)
}

fn init_threads() {
    if let Some(n) = std::env::var("LFD_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn run(cli: Cli) -> Result<i32> {
    if !matches!(cli.command, Command::Catalog) {
        calibrate()?;
    }
    let large = cli.allow_large;
    match cli.command {
        Command::Check { input } => check(&input, large),
        Command::Bernstein { method, input } => bernstein(&input, method, large),
        Command::Spectrum { at, input } => spectrum(&input, at, large),
        Command::Report { json, verify, timings, sampled, input } => {
            report(&input, json.as_deref(), verify, timings, sampled, large)
        }
        Command::Catalog => list_catalog(),
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let record = ErrorRecord::from(&e);
            eprintln!("{}", serde_json::to_string(&record).expect("error serialises"));
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
