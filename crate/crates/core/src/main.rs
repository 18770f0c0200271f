use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use num_rational::Rational64;

use desusp::arithmetic::{hilbert_local, Place};
use desusp::galois::GaloisModel;
use desusp::nilpotent::Class;
use desusp::obstruction::{run_obstruction, shift_reduction, ObstructionConfig};
use desusp::report::{reverify_report, Check, Report, Witness};
use desusp::suites::{self, anchors};
use desusp::Error;

const OUTPUT_DIR_ENV: &str = "DESUSP_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "desusp", version, about = "Finite-level verification of nilpotent extension classes and Hilbert-symbol obstructions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Level N of the finite Galois model (Z/N)^*; must be divisible by 24n.
    #[arg(long = "N", global = true, default_value_t = 72)]
    level: u64,
    /// Coefficient modulus n.
    #[arg(long = "n", global = true, default_value_t = 3)]
    modulus: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Primes up to this bound form the Hilbert witness search set.
    #[arg(long, global = true, default_value_t = 100)]
    bound: u64,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Restrict to the subgroup generated by these units mod N.
    #[arg(long = "generator", global = true)]
    generators: Vec<u64>,
    /// Restrict to a cyclic subgroup of this order.
    #[arg(long, global = true, conflicts_with = "generators")]
    cyclic_order: Option<usize>,
    /// Print the JSON report to stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Hilbert symbols of two rationals.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: Rational64,
        #[arg(long, allow_hyphen_values = true)]
        b: Rational64,
        /// A prime or `inf`.
        #[arg(long, conflicts_with = "all")]
        place: Option<Place>,
        /// Every place where the symbol can be nontrivial.
        #[arg(long)]
        all: bool,
    },
    /// The full obstruction pipeline.
    Obstruct {
        /// Control run in which 2 is a square.
        #[arg(long)]
        control_sqrt2: bool,
    },
    /// Re-verify the witnesses of a saved report.
    Report {
        #[arg(long)]
        check: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum Suite {
    GroupLaw,
    LcsRanks,
    Extension {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        class: u8,
    },
    Difference,
    Theta3,
    Hilbert,
    Reduction,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    if g.modulus == 0 || g.level == 0 || g.level % (24 * g.modulus) != 0 {
        Cli::command()
            .error(ErrorKind::ValueValidation, format!("--N {} must be a multiple of 24 * --n = {}", g.level, 24 * g.modulus))
            .exit();
    }
    let start = Instant::now();
    match run(&cli) {
        Ok(Outcome::Report(mut report)) => {
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            emit(&cli, &report)
        }
        Ok(Outcome::Reverified(code)) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidInput(_) | Error::UnsupportedModulus { .. } | Error::ClassMismatch { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

enum Outcome {
    Report(Report),
    Reverified(ExitCode),
}

fn custom_model(g: &Global) -> desusp::Result<Option<GaloisModel>> {
    if !g.generators.is_empty() {
        return GaloisModel::with_generators(g.level, g.modulus, &g.generators).map(Some);
    }
    match g.cyclic_order {
        Some(k) => GaloisModel::cyclic(g.level, g.modulus, k).map(Some),
        None => Ok(None),
    }
}

fn models_or(g: &Global, defaults: impl FnOnce() -> desusp::Result<Vec<GaloisModel>>) -> desusp::Result<Vec<GaloisModel>> {
    match custom_model(g)? {
        Some(m) => Ok(vec![m]),
        None => defaults(),
    }
}

fn run(cli: &Cli) -> desusp::Result<Outcome> {
    let g = &cli.global;
    let report = match &cli.command {
        Command::Verify { suite } => match suite {
            Suite::GroupLaw => suites::run_group_law(g.samples, g.seed),
            Suite::LcsRanks => suites::run_lcs_ranks()?,
            Suite::Extension { class } => {
                let class = if *class == 2 { Class::Two } else { Class::Three };
                let models = models_or(g, || suites::default_models(class))?;
                suites::run_extension(class, &models)?
            }
            Suite::Difference => suites::run_difference(&models_or(g, suites::difference_models)?)?,
            Suite::Theta3 => suites::run_theta3(&models_or(g, || suites::default_models(Class::Three))?)?,
            Suite::Hilbert => suites::run_hilbert_suite(g.seed, g.samples)?,
            Suite::Reduction => shift_reduction(g.level, g.modulus, 20, g.bound)?,
        },
        Command::Hilbert { a, b, place, all } => hilbert_report(*a, *b, *place, *all)?,
        Command::Obstruct { control_sqrt2 } => {
            let mut generators = g.generators.clone();
            if let Some(k) = g.cyclic_order {
                generators = GaloisModel::cyclic(g.level, g.modulus, k)?.generators().to_vec();
            }
            let cfg = ObstructionConfig {
                level: g.level,
                modulus: g.modulus,
                bound: g.bound,
                seed: g.seed,
                samples: g.samples,
                generators: (!generators.is_empty()).then_some(generators),
                control_sqrt2: *control_sqrt2,
            };
            run_obstruction(&cfg)?
        }
        Command::Report { check } => return Ok(Outcome::Reverified(check_report(check))),
    };
    Ok(Outcome::Report(report))
}

fn hilbert_report(a: Rational64, b: Rational64, place: Option<Place>, all: bool) -> desusp::Result<Report> {
    let places = match (place, all) {
        (Some(p), _) => vec![p],
        (None, true) => places_of(&[a, b])?,
        (None, false) => vec![Place::Infinity],
    };
    let mut report = Report::new("hilbert").parameter("a", a.to_string()).parameter("b", b.to_string());
    let mut product = 1;
    for p in places {
        let value = hilbert_local(a, b, p)?;
        product *= value;
        report.push(Check::new(
            format!("({a}, {b})_{p} = {value}"),
            anchors::HILBERT,
            true,
            Some(Witness::Hilbert { a: a.to_string(), b: b.to_string(), place: p, value }),
        ));
    }
    if all {
        report.push(Check::new(format!("product over all places = {product}"), anchors::HILBERT, product == 1, None));
    }
    Ok(report)
}

/// Infinity, 2, and the odd primes dividing a numerator or denominator.
fn places_of(values: &[Rational64]) -> desusp::Result<Vec<Place>> {
    let mut primes = std::collections::BTreeSet::from([2u64]);
    for q in values {
        if *q.numer() == 0 {
            return Err(Error::InvalidInput("Hilbert symbols need nonzero arguments".into()));
        }
        for mut m in [q.numer().unsigned_abs(), q.denom().unsigned_abs()] {
            let mut p = 2;
            while p * p <= m {
                while m % p == 0 {
                    primes.insert(p);
                    m /= p;
                }
                p += 1;
            }
            if m > 1 {
                primes.insert(m);
            }
        }
    }
    let mut out = vec![Place::Infinity];
    for p in primes {
        out.push(Place::prime(p)?);
    }
    Ok(out)
}

fn slug(command: &str) -> String {
    command
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("-")
}

fn write_json(path: &Path, report: &Report) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, report.to_json() + "\n")
}

fn emit(cli: &Cli, report: &Report) -> ExitCode {
    let target = cli.global.output.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_ENV).map(|d| PathBuf::from(d).join(format!("{}.json", slug(&report.command))))
    });
    if let Some(path) = &target {
        if let Err(e) = write_json(path, report) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.global.json {
        println!("{}", report.to_json());
    } else {
        print_text(report, target.as_deref());
    }
    match report.first_failure() {
        None => ExitCode::SUCCESS,
        Some(check) => {
            eprintln!("failing check: {} [{}]", check.name, check.anchor);
            ExitCode::from(1)
        }
    }
}

fn print_text(report: &Report, json_path: Option<&Path>) {
    println!("{}", report.command);
    for (k, v) in &report.parameters {
        println!("  {k} = {v}");
    }
    for check in &report.checks {
        let mark = if check.passed() { "pass" } else { "FAIL" };
        println!("[{mark}] {} ({})", check.name, check.anchor);
        if let Some(Witness::Pairing { u, partner, place }) = &check.witness {
            println!("       witness: ({u}, {partner})_{place} = -1");
        }
    }
    if let Some(Witness::LcsRanks { ranks }) = report.checks.iter().find_map(|c| c.witness.as_ref()) {
        let r: Vec<String> = ranks.iter().map(usize::to_string).collect();
        println!("ranks: {}", r.join(", "));
    }
    let passed = report.checks.iter().filter(|c| c.passed()).count();
    println!("{passed}/{} checks passed in {} ms", report.checks.len(), report.elapsed_ms);
    if let Some(v) = report.verdict {
        let v = serde_json::to_value(v).expect("verdict serializes");
        println!("verdict: {}", v.as_str().unwrap_or_default());
    }
    if let Some(p) = json_path {
        println!("report written to {}", p.display());
    }
}

fn check_report(path: &Path) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let report = match Report::from_json(&text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let results = reverify_report(&report);
    let mut failure = None;
    for r in &results {
        println!("[{}] {}: {}", if r.ok { "ok" } else { "FAIL" }, r.name, r.message);
        if !r.ok && failure.is_none() {
            failure = Some(r.name.clone());
        }
    }
    let ok = results.iter().filter(|r| r.ok).count();
    println!("{ok}/{} re-verified", results.len());
    match failure {
        None => ExitCode::SUCCESS,
        Some(name) => {
            eprintln!("failing check: {name}");
            ExitCode::from(1)
        }
    }
}
