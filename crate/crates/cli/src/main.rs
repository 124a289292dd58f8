use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use levicount::cycles::{self, count_cycles_graph, count_gons, work_estimate};
use levicount::levi::{closed_walks_direct, closed_walks_formula, LeviGraph};
use levicount::plane::{self, pg2, Plane, PlaneError};
use levicount::poly::{self, int, rational_string, SampleSet};
use levicount::quasigon::{self, census, check_cycle_bounds};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "levicount",
    version,
    about = "Exact cycle counts in Levi graphs of projective planes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate, validate or dualize a plane.
    #[command(subcommand)]
    Plane(PlaneCommand),
    /// Compare the closed-walk formula with a direct trace computation.
    Walks(WalksArgs),
    /// Count 2k-cycles of a Levi graph.
    Cycles(CyclesArgs),
    /// Classify all ordered k-tuples of points by number of distinct lines.
    Census(CensusArgs),
    /// Check census counts and cycle counts against the structural bounds.
    Bounds(BoundsArgs),
    /// Interpolate counts exactly and compare the leading coefficients.
    Fit(FitArgs),
    /// Evaluate the square-graph cap on 2k-cycles.
    Cap(CapArgs),
    /// Residuals of counts against the conjectured three-term expansion.
    Conjecture(ConjectureArgs),
}

#[derive(Subcommand)]
enum PlaneCommand {
    /// Write PG(2, p^e) in the plane file format.
    Gen(GenArgs),
    /// Validate a plane file against the projective plane axioms.
    Check(CheckArgs),
    /// Write the dual plane.
    Dual(DualArgs),
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Characteristic of the coordinate field.
    #[arg(long)]
    p: Option<u64>,
    /// Plane file.
    #[arg(long)]
    plane: Option<PathBuf>,
}

#[derive(Args)]
struct PlaneSource {
    #[command(flatten)]
    source: Source,
    /// Extension degree of the coordinate field.
    #[arg(long, default_value_t = 1, requires = "p")]
    e: u32,
}

#[derive(Args)]
struct Work {
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Largest estimated amount of enumeration work to attempt.
    #[arg(long)]
    budget: Option<f64>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    plane: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DualArgs {
    #[command(flatten)]
    source: PlaneSource,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct WalksArgs {
    /// Plane order (a prime power).
    #[arg(long)]
    n: u64,
    /// Walks of length 2k.
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
#[group(id = "kspec", required = true, multiple = false)]
struct KSpec {
    #[arg(long)]
    k: Option<usize>,
    /// Count every k from 3 up to this value.
    #[arg(long)]
    kmax: Option<usize>,
}

#[derive(Args)]
struct CyclesArgs {
    #[command(flatten)]
    source: PlaneSource,
    #[command(flatten)]
    ks: KSpec,
    /// Recount with the generic graph search and compare.
    #[arg(long)]
    cross_check: bool,
    /// Include wall-clock seconds in the output.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    work: Work,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    source: PlaneSource,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    work: Work,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    source: PlaneSource,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    work: Work,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FitArgs {
    /// CSV with header `n,count`.
    #[arg(long)]
    counts: PathBuf,
    /// The counts are of 2k-cycles.
    #[arg(long)]
    k: usize,
    /// Orders used for interpolation; defaults to the smallest 2k+1 in the file.
    /// Remaining rows are predicted and compared.
    #[arg(long, value_delimiter = ',')]
    fit_orders: Option<Vec<u64>>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CapArgs {
    /// Number of vertices (even).
    #[arg(long)]
    v: u64,
    #[arg(long)]
    k: usize,
    /// A 2k-cycle count to compare with the cap.
    #[arg(long)]
    count: Option<BigUint>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ConjectureArgs {
    #[arg(long)]
    counts: PathBuf,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    output: Output,
}

/// A finished run: JSON payload, human summary, exit code.
struct Outcome {
    json: Value,
    summary: String,
    code: u8,
}

impl Outcome {
    fn new(json: Value, summary: impl Into<String>, ok: bool) -> Self {
        Outcome {
            json,
            summary: summary.into(),
            code: if ok { 0 } else { EXIT_CHECK_FAILED },
        }
    }
}

/// A run that could not produce a result.
struct Failure {
    message: String,
    code: u8,
    json: Option<Value>,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            message: message.to_string(),
            code: EXIT_USAGE,
            json: None,
        }
    }

    fn budget(message: impl ToString) -> Self {
        Failure {
            message: message.to_string(),
            code: EXIT_BUDGET,
            json: None,
        }
    }
}

impl From<PlaneError> for Failure {
    fn from(e: PlaneError) -> Self {
        match e {
            PlaneError::Invalid(report) => Failure {
                message: format!("plane fails validation:\n{report}"),
                code: EXIT_CHECK_FAILED,
                json: Some(report.to_json()),
            },
            other => Failure::usage(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (output, result) = match cli.command {
        Command::Plane(PlaneCommand::Gen(a)) => (a.output.out.clone(), run_gen(&a)),
        Command::Plane(PlaneCommand::Check(a)) => (a.output.out.clone(), run_check(&a)),
        Command::Plane(PlaneCommand::Dual(a)) => (a.output.out.clone(), run_dual(&a)),
        Command::Walks(a) => (a.output.out.clone(), run_walks(&a)),
        Command::Cycles(a) => (a.output.out.clone(), run_cycles(&a)),
        Command::Census(a) => (a.output.out.clone(), run_census(&a)),
        Command::Bounds(a) => (a.output.out.clone(), run_bounds(&a)),
        Command::Fit(a) => (a.output.out.clone(), run_fit(&a)),
        Command::Cap(a) => (a.output.out.clone(), run_cap(&a)),
        Command::Conjecture(a) => (a.output.out.clone(), run_conjecture(&a)),
    };
    match result {
        Ok(Emit::Json(outcome)) => {
            if !outcome.summary.is_empty() {
                eprint!("{}", outcome.summary);
            }
            let mut text = serde_json::to_string_pretty(&outcome.json).expect("json");
            text.push('\n');
            if let Err(e) = write_output(output.as_ref(), &text) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(outcome.code)
        }
        Ok(Emit::Text(text)) => match write_output(output.as_ref(), &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_USAGE)
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message);
            if let Some(json) = f.json {
                let mut text = serde_json::to_string_pretty(&json).expect("json");
                text.push('\n');
                let _ = write_output(output.as_ref(), &text);
            }
            ExitCode::from(f.code)
        }
    }
}

enum Emit {
    Json(Outcome),
    Text(String),
}

fn write_output(path: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn load_source(src: &PlaneSource) -> Result<Plane, Failure> {
    match (&src.source.p, &src.source.plane) {
        (Some(p), None) => Ok(pg2(*p, src.e)?),
        (None, Some(path)) => Ok(Plane::load(path)?),
        _ => Err(Failure::usage("give exactly one of --p or --plane")),
    }
}

fn run_gen(a: &GenArgs) -> Result<Emit, Failure> {
    Ok(Emit::Text(pg2(a.p, a.e)?.to_text()))
}

fn run_check(a: &CheckArgs) -> Result<Emit, Failure> {
    let text = std::fs::read_to_string(&a.plane).map_err(Failure::usage)?;
    let inc = plane::parse_incidence(&text)?;
    let report = plane::validate(&inc);
    Ok(Emit::Json(Outcome::new(
        report.to_json(),
        report.to_string(),
        report.is_valid(),
    )))
}

fn run_dual(a: &DualArgs) -> Result<Emit, Failure> {
    Ok(Emit::Text(load_source(&a.source)?.dual().to_text()))
}

fn run_walks(a: &WalksArgs) -> Result<Emit, Failure> {
    if a.k == 0 {
        return Err(Failure::usage("--k must be at least 1"));
    }
    let plane = plane::pg2_order(a.n)?;
    let levi = LeviGraph::new(&plane);
    let formula = closed_walks_formula(a.n, a.k);
    let direct = closed_walks_direct(&levi, a.k).map_err(Failure::usage)?;
    let ok = formula == direct;
    let json = json!({
        "n": a.n,
        "k": a.k,
        "formula": formula.to_string(),
        "direct": direct.to_string(),
        "match": ok,
    });
    let summary = format!(
        "n={} k={}: formula {} direct {} {}\n",
        a.n,
        a.k,
        formula,
        direct,
        verdict(ok)
    );
    Ok(Emit::Json(Outcome::new(json, summary, ok)))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

/// Count record plus optional cross-check and the square-graph cap.
fn cycle_record(
    plane: &Plane,
    levi: Option<&LeviGraph>,
    k: usize,
    threads: usize,
    timing: bool,
    summary: &mut String,
) -> Result<(Value, bool), Failure> {
    let c = count_gons(plane, k, threads).map_err(Failure::usage)?;
    let mut rec = c.to_json(timing);
    let obj = rec.as_object_mut().unwrap();
    let mut ok = true;
    let cap = poly::square_cap(2 * plane.num_points() as u64, k).map_err(Failure::usage)?;
    let under_cap = int(BigInt::from(c.count.clone())) <= cap;
    ok &= under_cap;
    obj.insert("cap".into(), rational_string(&cap).into());
    obj.insert("under_cap".into(), under_cap.into());
    let mut line = format!(
        "k={:<3} c_2k = {:<24} cap {}",
        k,
        c.count,
        verdict(under_cap)
    );
    if let Some(levi) = levi {
        let g = count_cycles_graph(levi, 2 * k, threads).map_err(Failure::usage)?;
        let agree = g.count == c.count;
        ok &= agree;
        obj.insert(
            "cross_check".into(),
            json!({"algo": g.algo.name(), "count": g.count.to_string(), "agree": agree}),
        );
        line.push_str(&format!("  cross-check {}", verdict(agree)));
    }
    summary.push_str(&line);
    summary.push('\n');
    Ok((rec, ok))
}

fn run_cycles(a: &CyclesArgs) -> Result<Emit, Failure> {
    let plane = load_source(&a.source)?;
    let budget = a.work.budget.unwrap_or(cycles::DEFAULT_BUDGET);
    let levi = a.cross_check.then(|| LeviGraph::new(&plane));
    let mut summary = String::new();
    if let Some(k) = a.ks.k {
        if k < 3 {
            return Err(Failure::usage("--k must be at least 3"));
        }
        let est = work_estimate(plane.order(), k);
        if est > budget {
            return Err(Failure::budget(format!(
                "estimated work {est:.3e} exceeds budget {budget:.3e}"
            )));
        }
        let (rec, ok) = cycle_record(
            &plane,
            levi.as_ref(),
            k,
            a.work.threads,
            a.timing,
            &mut summary,
        )?;
        return Ok(Emit::Json(Outcome::new(rec, summary, ok)));
    }
    let kmax = a.ks.kmax.expect("clap enforces one of --k/--kmax");
    let mut records = Vec::new();
    let mut ok = true;
    let mut truncated_at = None;
    for k in 3..=kmax {
        if work_estimate(plane.order(), k) > budget {
            truncated_at = Some(k);
            break;
        }
        let (rec, good) = cycle_record(
            &plane,
            levi.as_ref(),
            k,
            a.work.threads,
            a.timing,
            &mut summary,
        )?;
        ok &= good;
        records.push(rec);
    }
    let json = json!({
        "n": plane.order(),
        "counts": records,
        "truncated_at": truncated_at,
    });
    if let Some(k) = truncated_at {
        summary.push_str(&format!(
            "stopped before k={k}: work budget {budget:.3e} exceeded\n"
        ));
        return Ok(Emit::Json(Outcome {
            json,
            summary,
            code: EXIT_BUDGET,
        }));
    }
    Ok(Emit::Json(Outcome::new(json, summary, ok)))
}

fn run_census(a: &CensusArgs) -> Result<Emit, Failure> {
    let plane = load_source(&a.source)?;
    let budget = a.work.budget.unwrap_or(quasigon::DEFAULT_CENSUS_BUDGET);
    let c = census(&plane, a.k, a.work.threads, budget).map_err(census_failure)?;
    let identities = c.identities();
    let ok = identities.iter().all(|x| x.1);
    let mut json = c.to_json();
    let checks: serde_json::Map<String, Value> = identities
        .iter()
        .map(|(name, good)| (name.to_string(), (*good).into()))
        .collect();
    json.as_object_mut()
        .unwrap()
        .insert("checks".into(), checks.into());
    let mut summary = format!("n={} k={}\n", c.order, c.k);
    for (j, q) in c.by_lines.iter().enumerate() {
        summary.push_str(&format!("  {} lines: {}\n", j + 1, q));
    }
    summary.push_str(&format!(
        "  consecutive repeat: {}  split repeat: {}\n",
        c.almost_gons, c.split_repeats
    ));
    for (name, good) in &identities {
        summary.push_str(&format!(
            "  {:<5} {}\n",
            if *good { "ok" } else { "FAIL" },
            name
        ));
    }
    Ok(Emit::Json(Outcome::new(json, summary, ok)))
}

fn census_failure(e: quasigon::QuasiGonError) -> Failure {
    match e {
        quasigon::QuasiGonError::BudgetExceeded { .. } => Failure::budget(e),
        other => Failure::usage(other),
    }
}

fn run_bounds(a: &BoundsArgs) -> Result<Emit, Failure> {
    let plane = load_source(&a.source)?;
    let k = a.k;
    if k < 4 {
        return Err(Failure::usage("--k must be at least 4"));
    }
    let budget = a.work.budget.unwrap_or(quasigon::DEFAULT_CENSUS_BUDGET);
    let n = plane.order();
    let est = work_estimate(n, k);
    if est > budget {
        return Err(Failure::budget(format!(
            "estimated work {est:.3e} exceeds budget {budget:.3e}"
        )));
    }
    let c = census(&plane, k, a.work.threads, budget).map_err(census_failure)?;
    let c_prev = count_gons(&plane, k - 1, a.work.threads)
        .map_err(Failure::usage)?
        .count;
    let count = count_gons(&plane, k, a.work.threads)
        .map_err(Failure::usage)?
        .count;
    let report = check_cycle_bounds(&c, &c_prev, &count);
    let mut json = report.to_json();
    let obj = json.as_object_mut().unwrap();
    obj.insert("n".into(), n.into());
    obj.insert("k".into(), k.into());
    obj.insert("count".into(), count.to_string().into());
    obj.insert("c_prev".into(), c_prev.to_string().into());
    let ok = report.passed();
    Ok(Emit::Json(Outcome::new(json, report.to_string(), ok)))
}

fn read_samples(path: &PathBuf) -> Result<SampleSet, Failure> {
    let file = std::fs::File::open(path).map_err(Failure::usage)?;
    SampleSet::from_csv(file).map_err(Failure::usage)
}

fn run_fit(a: &FitArgs) -> Result<Emit, Failure> {
    let samples = read_samples(&a.counts)?;
    let degree = 2 * a.k;
    let orders: Vec<u64> = match &a.fit_orders {
        Some(o) => o.clone(),
        None => samples.iter().take(degree + 1).map(|s| s.0).collect(),
    };
    let (fit_set, held_out) = samples.partition(&orders);
    let poly = poly::fit_exact(&fit_set, degree).map_err(Failure::usage)?;
    let report = poly::check_leading_coefficients(&poly, a.k).map_err(Failure::usage)?;
    let mut ok = report.passed();
    let mut summary = format!("fit through n = {orders:?}\n  {poly}\n");
    for c in &report.checks {
        summary.push_str(&format!(
            "  n^{:<3} expected {:<8} found {:<8} {}\n",
            c.power,
            c.expected.to_string(),
            c.found.to_string(),
            verdict(c.ok())
        ));
    }
    let mut predictions = Vec::new();
    for (n, count) in held_out.iter() {
        let predicted = poly.eval_int(*n);
        let hit = predicted == int(count.clone());
        ok &= hit;
        summary.push_str(&format!(
            "  held out n={n}: predicted {predicted}, counted {count} {}\n",
            verdict(hit)
        ));
        predictions.push(json!({
            "n": n,
            "count": count.to_string(),
            "predicted": rational_string(&predicted),
            "match": hit,
        }));
    }
    let json = json!({
        "k": a.k,
        "fit_orders": orders,
        "polynomial": poly.to_json(),
        "leading": report.to_json(),
        "held_out": predictions,
        "passed": ok,
    });
    Ok(Emit::Json(Outcome::new(json, summary, ok)))
}

fn run_cap(a: &CapArgs) -> Result<Emit, Failure> {
    let cap = poly::square_cap(a.v, a.k).map_err(Failure::usage)?;
    let mut obj = serde_json::Map::new();
    obj.insert("v".into(), a.v.into());
    obj.insert("k".into(), a.k.into());
    obj.insert("cap".into(), rational_string(&cap).into());
    let mut summary = format!("v={} k={}: cap {}\n", a.v, a.k, cap);
    let mut ok = true;
    if let Some(c) = &a.count {
        ok = int(BigInt::from(c.clone())) <= cap;
        obj.insert("count".into(), c.to_string().into());
        obj.insert("under_cap".into(), ok.into());
        summary.push_str(&format!("  count {c} {}\n", verdict(ok)));
    }
    Ok(Emit::Json(Outcome::new(Value::Object(obj), summary, ok)))
}

fn run_conjecture(a: &ConjectureArgs) -> Result<Emit, Failure> {
    let samples = read_samples(&a.counts)?;
    let report = poly::conjecture_residuals(a.k, &samples).map_err(Failure::usage)?;
    let mut summary = format!("k={}: residual / n^(2k-4)\n", a.k);
    for r in &report.residuals {
        summary.push_str(&format!("  n={:<4} {}\n", r.n, r.ratio));
    }
    Ok(Emit::Json(Outcome::new(report.to_json(), summary, true)))
}
