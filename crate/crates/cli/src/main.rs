//! `stirbess`: number triangles, moment polynomials, the identity suite and
//! the occupation-time simulator from the command line.
//!
//! Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 identity failure or out-of-tolerance simulation, 2 usage error.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stirling_bessel::exactnum::{parse_rat, Rat};
use stirling_bessel::identities::{run_suite, IdentityReport, ALL_IDS};
use stirling_bessel::occupation::{estimate_moments, self_similarity_check, SimConfig, SimResult};
use stirling_bessel::polyengine::{
    bessel_poly, chebyshev_t, pn_closed_form, pn_recurrence, pn_recurrence_at, reverse_bessel_poly,
};
use stirling_bessel::triangles::{
    bessel_first, bessel_second, gs_table, lah, stirling1, stirling1_signed, stirling2, Tables,
};
use stirling_bessel::{BiPoly, Error, UniPoly};

/// Tolerance on simulation z-scores for a zero exit status.
const Z_BOUND: f64 = 5.0;

#[derive(Parser)]
#[command(
    name = "stirbess",
    version,
    about = "Stirling and Bessel number triangles, occupation-time moment polynomials, identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print rows 0..=n of a number triangle.
    Triangle(TriangleArgs),
    /// Print the coefficients of a polynomial.
    Poly(PolyArgs),
    /// Check identities exactly over their parameter ranges.
    Verify(VerifyArgs),
    /// Estimate occupation-time moments of skew Brownian motion.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TriangleFamily {
    Stirling1,
    #[value(name = "stirling1-signed")]
    Stirling1Signed,
    Stirling2,
    Lah,
    #[value(name = "bessel-b")]
    BesselFirst,
    #[value(name = "bessel-B")]
    BesselSecond,
    Gs,
}

#[derive(Args)]
struct TriangleArgs {
    family: TriangleFamily,
    /// Last row to print.
    #[arg(long = "n", default_value_t = 10)]
    n: u32,
    /// GS parameter s, as p/q or an integer.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    s: Option<Rat>,
    /// GS parameter h, as p/q or an integer.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    h: Option<Rat>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolyKind {
    /// P_n(x, z) from its recurrence.
    Pn,
    /// P_n(x, z) from the closed form.
    PnClosed,
    /// Bessel polynomial y_n(x).
    BesselY,
    /// Reverse Bessel polynomial theta_n(x).
    BesselTheta,
    /// Chebyshev polynomial T_n(x).
    Chebyshev,
}

#[derive(Args)]
struct PolyArgs {
    which: PolyKind,
    #[arg(long = "n")]
    n: u32,
    /// Substitute z (pn and pn-closed only).
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    z: Option<Rat>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity ids; see --list.
    ids: Vec<String>,
    /// Run every identity.
    #[arg(long)]
    all: bool,
    /// List identity ids and exit.
    #[arg(long)]
    list: bool,
    #[arg(long, default_value_t = 20)]
    n_max: u32,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    /// Include per-identity wall time (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Skewness in (0, 1), decimal.
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    #[arg(long, default_value_t = 100_000)]
    paths: u64,
    #[arg(long, default_value_t = 4)]
    moments: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also check E[A_t^n] = t^n P_n at this horizon in (0, 1].
    #[arg(long, value_parser = rational)]
    t: Option<Rat>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[arg(long)]
    jobs: Option<usize>,
}

fn rational(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

/// Failure of a subcommand, mapped onto the exit-code contract.
enum Failure {
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Triangle(args) => triangle(args),
        Command::Poly(args) => poly(args),
        Command::Verify(args) => verify(args),
        Command::Simulate(args) => simulate(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json serializes")
    );
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn triangle(args: TriangleArgs) -> Outcome {
    let family = args.family;
    if family != TriangleFamily::Gs && (args.s.is_some() || args.h.is_some()) {
        return Err(Failure::Usage(
            "--s and --h apply only to the gs family".into(),
        ));
    }
    let name = family
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    let rows: Vec<Vec<String>> = match family {
        TriangleFamily::Gs => {
            let (Some(s), Some(h)) = (args.s.clone(), args.h.clone()) else {
                return Err(Failure::Usage("gs needs both --s and --h".into()));
            };
            let table = gs_table(&s, &h, args.n)?;
            (0..=args.n)
                .map(|n| {
                    table
                        .row(n)
                        .expect("row built")
                        .iter()
                        .map(Rat::to_string)
                        .collect()
                })
                .collect()
        }
        _ => {
            let value = |n: u32, k: i64| match family {
                TriangleFamily::Stirling1 => stirling1(n, k),
                TriangleFamily::Stirling1Signed => stirling1_signed(n, k),
                TriangleFamily::Stirling2 => stirling2(n, k),
                TriangleFamily::Lah => lah(n, k),
                TriangleFamily::BesselFirst => bessel_first(n, k),
                TriangleFamily::BesselSecond => bessel_second(n, k),
                TriangleFamily::Gs => unreachable!(),
            };
            (0..=args.n)
                .map(|n| (0..=n as i64).map(|k| value(n, k).to_string()).collect())
                .collect()
        }
    };
    match args.format {
        Format::Table => {
            for row in &rows {
                println!("{}", row.join(" "));
            }
        }
        Format::Csv => {
            println!("n,k,value");
            for (n, row) in rows.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    println!("{n},{k},{v}");
                }
            }
        }
        Format::Json => {
            let mut out = json!({ "family": name, "n": args.n, "rows": rows });
            if let (Some(s), Some(h)) = (&args.s, &args.h) {
                out["s"] = json!(s.to_string());
                out["h"] = json!(h.to_string());
            }
            print_json(&out);
        }
    }
    Ok(())
}

enum AnyPoly {
    Uni(UniPoly),
    Bi(BiPoly),
}

fn poly(args: PolyArgs) -> Outcome {
    let is_pn = matches!(args.which, PolyKind::Pn | PolyKind::PnClosed);
    if args.z.is_some() && !is_pn {
        return Err(Failure::Usage(
            "--z applies only to pn and pn-closed".into(),
        ));
    }
    let p = match (args.which, &args.z) {
        (PolyKind::Pn, None) => AnyPoly::Bi(pn_recurrence(args.n)?),
        (PolyKind::Pn, Some(z)) => AnyPoly::Uni(pn_recurrence_at(args.n, z)?),
        (PolyKind::PnClosed, None) => AnyPoly::Bi(pn_closed_form(args.n)?),
        (PolyKind::PnClosed, Some(z)) => AnyPoly::Uni(pn_closed_form(args.n)?.substitute_z(z)),
        (PolyKind::BesselY, _) => AnyPoly::Uni(bessel_poly(args.n)),
        (PolyKind::BesselTheta, _) => AnyPoly::Uni(reverse_bessel_poly(args.n)),
        (PolyKind::Chebyshev, _) => AnyPoly::Uni(chebyshev_t(args.n)),
    };
    let name = args
        .which
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    match (p, args.format) {
        (AnyPoly::Uni(p), Format::Table) => println!("{p}"),
        (AnyPoly::Uni(p), Format::Csv) => {
            println!("degree,coeff");
            for (d, c) in p.coeffs().iter().enumerate() {
                println!("{d},{c}");
            }
        }
        (AnyPoly::Uni(p), Format::Json) => {
            let coeffs: Vec<String> = p.coeffs().iter().map(Rat::to_string).collect();
            let mut out =
                json!({ "poly": name, "n": args.n, "coefficients": coeffs, "text": p.to_string() });
            if let Some(z) = &args.z {
                out["z"] = json!(z.to_string());
            }
            print_json(&out);
        }
        (AnyPoly::Bi(p), Format::Table) => {
            for (&(i, j), c) in p.terms() {
                println!("{i} {j} {c}");
            }
        }
        (AnyPoly::Bi(p), Format::Csv) => {
            println!("i,j,coeff");
            for (&(i, j), c) in p.terms() {
                println!("{i},{j},{c}");
            }
        }
        (AnyPoly::Bi(p), Format::Json) => {
            let terms: Vec<Value> = p
                .terms()
                .map(|(&(i, j), c)| json!({ "i": i, "j": j, "coeff": c.to_string() }))
                .collect();
            print_json(
                &json!({ "poly": name, "n": args.n, "terms": terms, "text": p.to_string() }),
            );
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Outcome {
    if args.list {
        for id in ALL_IDS {
            println!("{id}");
        }
        return Ok(());
    }
    let selection: Vec<String> = match (args.all, args.ids.is_empty()) {
        (true, true) => ALL_IDS.iter().map(|s| s.to_string()).collect(),
        (true, false) => {
            return Err(Failure::Usage(
                "give identity ids or --all, not both".into(),
            ))
        }
        (false, true) => {
            return Err(Failure::Usage(
                "no identities selected; give ids or --all".into(),
            ))
        }
        (false, false) => args.ids.clone(),
    };
    if args.n_max == 0 {
        return Err(Failure::Usage("--n-max must be at least 1".into()));
    }
    let start = Instant::now();
    let n_max = args.n_max;
    let reports = with_jobs(args.jobs, || {
        run_suite(&Tables::new(n_max + 1), n_max, &selection)
    })??;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    emit_reports(&reports, n_max, args.format, args.timings);
    eprintln!(
        "{} of {} identities passed in {:.2?}",
        reports.len() - failed,
        reports.len(),
        start.elapsed()
    );
    if failed > 0 {
        return Err(Failure::Check);
    }
    Ok(())
}

fn emit_reports(reports: &[IdentityReport], n_max: u32, format: Format, timings: bool) {
    match format {
        Format::Json => {
            let items: Vec<Value> = reports.iter().map(|r| r.to_json(timings)).collect();
            let passed = reports.iter().all(IdentityReport::passed);
            print_json(&json!({ "n_max": n_max, "passed": passed, "reports": items }));
        }
        Format::Csv => {
            let mut header = String::from("id,range,status,points,counterexample");
            if timings {
                header.push_str(",elapsed_ms");
            }
            println!("{header}");
            for r in reports {
                let cex = r
                    .counterexample
                    .as_ref()
                    .map(describe_counterexample)
                    .unwrap_or_default();
                let mut line = format!(
                    "{},{},{},{},{}",
                    r.id,
                    csv_field(&r.range),
                    status_word(r),
                    r.points,
                    csv_field(&cex)
                );
                if timings {
                    line.push_str(&format!(",{}", r.elapsed.as_millis()));
                }
                println!("{line}");
            }
        }
        Format::Table => {
            let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(0);
            for r in reports {
                let mut line = format!(
                    "{:<width$}  {:<4}  {:>6}  {}",
                    r.id,
                    status_word(r),
                    r.points,
                    r.range
                );
                if timings {
                    line.push_str(&format!("  ({} ms)", r.elapsed.as_millis()));
                }
                println!("{line}");
                if let Some(c) = &r.counterexample {
                    println!(
                        "{:<width$}  counterexample: {}",
                        "",
                        describe_counterexample(c)
                    );
                }
            }
        }
    }
}

fn status_word(r: &IdentityReport) -> &'static str {
    if r.passed() {
        "pass"
    } else {
        "FAIL"
    }
}

fn describe_counterexample(c: &stirling_bessel::identities::Counterexample) -> String {
    let at: Vec<String> =
        c.at.iter()
            .map(|b| format!("{}={}", b.name, b.value))
            .collect();
    format!("{}: lhs = {}, rhs = {}", at.join(" "), c.lhs, c.rhs)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn simulate(args: SimulateArgs) -> Outcome {
    let config = SimConfig {
        alpha: args.alpha,
        steps: args.steps,
        paths: args.paths,
        max_moment: args.moments,
        seed: args.seed,
    };
    config.validate()?;
    let start = Instant::now();
    let t = args.t.clone();
    let (full, scaled) = with_jobs(args.jobs, || -> Result<_, Error> {
        let full = estimate_moments(&config)?;
        let scaled = t
            .as_ref()
            .map(|t| self_similarity_check(&config, t))
            .transpose()?;
        Ok((full, scaled))
    })??;
    match args.format {
        Format::Json => {
            let mut out = json!({ "estimate": sim_json(&full) });
            if let Some(s) = &scaled {
                out["self_similarity"] = sim_json(s);
            }
            print_json(&out);
        }
        Format::Csv => {
            print!("{}", full.to_csv());
            if let Some(s) = &scaled {
                println!();
                print!("{}", s.to_csv());
            }
        }
        Format::Table => {
            print_sim_table(&full);
            if let Some(s) = &scaled {
                println!();
                print_sim_table(s);
            }
        }
    }
    eprintln!(
        "simulated {} paths of {} steps in {:.2?}",
        config.paths,
        config.steps,
        start.elapsed()
    );
    let ok = full.within(Z_BOUND) && scaled.as_ref().is_none_or(|s| s.within(Z_BOUND));
    if !ok {
        eprintln!("some z-score reaches {Z_BOUND} in magnitude");
        return Err(Failure::Check);
    }
    Ok(())
}

fn sim_json(r: &SimResult) -> Value {
    serde_json::to_value(r).expect("result serializes")
}

fn print_sim_table(r: &SimResult) {
    println!(
        "alpha={} steps={} paths={} seed={} t={}",
        r.config.alpha, r.config.steps, r.paths, r.config.seed, r.horizon
    );
    println!(
        "{:>3}  {:>12}  {:>12}  {:>12}  {:>8}",
        "n", "mean", "stderr", "exact", "z"
    );
    let opt =
        |v: Option<f64>, prec: usize| v.map_or_else(|| "-".to_string(), |x| format!("{x:.prec$}"));
    for m in &r.moments {
        println!(
            "{:>3}  {:>12.8}  {:>12}  {:>12.8}  {:>8}",
            m.n,
            m.empirical_mean,
            opt(m.standard_error, 8),
            m.exact_value,
            opt(m.z_score, 3)
        );
    }
}
