//! `schatten`: run verification suites, second-derivative evaluations, tightness scans and
//! extremal searches from the command line.
//!
//! Exit codes: 0 all checks passed, 1 an inequality violation was recorded, 2 usage or
//! configuration error, 3 numerical error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use schatten::linalg::schatten_norm;
use schatten::opint::{norm_sq_second_derivative, trace_second_derivative};
use schatten::verify::{
    extremal_search, fd_oracle, fit_tightness_constant, norm_sq_fd, run_suite, sample_indefinite_invertible,
    sample_matrix, sub_seed, tightness_scan, CheckKind, Ensemble, ExtremalResult, TightnessPoint,
};
use schatten::{ComplexMatrix, Error, ScalarFunction, SelfAdjointMatrix, SuiteReport, TrialConfig};

#[derive(Parser, Debug)]
#[command(name = "schatten", version, about = "Randomized checks of the optimal 2-uniform convexity inequality for Schatten classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites and export the report.
    Verify(SuiteArgs),
    /// Run a suite over a grid of p values and tabulate the worst gap per p.
    Sweep(SuiteArgs),
    /// Second derivative of t -> ||A + tB||_p^2 against its lower bound and finite differences.
    SecondDeriv(SecondDerivArgs),
    /// rho(eps) on the commuting family A = I, B = diag(eps, -eps).
    Tightness(TightnessArgs),
    /// Hill-climbing search for small normalized gaps of the norm inequality.
    Extremal(ExtremalArgs),
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// JSON configuration file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated checks: all, bcl, key, monotone, convexity, fp, integral, opmono.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    /// Smallest dimension; trials cycle through min-dim..=dim.
    #[arg(long)]
    min_dim: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Single p value.
    #[arg(long, conflicts_with = "p_grid", allow_negative_numbers = true)]
    p: Option<f64>,
    /// `a:b:step` or a comma list.
    #[arg(long, allow_negative_numbers = true)]
    p_grid: Option<String>,
    /// `a:b:step` or a comma list.
    #[arg(long, allow_negative_numbers = true)]
    alpha_grid: Option<String>,
    /// Floor for normalized gaps of every check.
    #[arg(long)]
    tol: Option<f64>,
    /// complex-ginibre, self-adjoint or positive-definite.
    #[arg(long)]
    ensemble: Option<Ensemble>,
    /// Unitaries per random unitary-mixture channel.
    #[arg(long)]
    unitaries: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Report path; `.json` or `.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args, Debug)]
struct SecondDerivArgs {
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Matrix JSON for A; sampled indefinite invertible when absent.
    #[arg(long)]
    a: Option<PathBuf>,
    /// Matrix JSON for B; sampled self-adjoint when absent.
    #[arg(long)]
    b: Option<PathBuf>,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct TightnessArgs {
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
    /// Comma list.
    #[arg(long, default_value = "1e-2,1e-3,1e-4")]
    eps: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ExtremalArgs {
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 10_000)]
    iters: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Passed,
    Violation,
    NumericalError,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn output_format(out: Option<&Path>, allowed: &[Format]) -> Result<Option<Format>, Failure> {
    let Some(path) = out else { return Ok(None) };
    let fmt = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        _ => return Err(usage(format!("--out {}: extension must be .json or .csv", path.display()))),
    };
    if !allowed.contains(&fmt) {
        return Err(usage(format!("--out {}: this command writes JSON only", path.display())));
    }
    Ok(Some(fmt))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization is infallible")
}

/// Parses `a:b:step` (inclusive) or `x,y,z`.
fn parse_grid(name: &str, s: &str) -> Result<Vec<f64>, Failure> {
    let bad = |what: &str| usage(format!("--{name} '{s}': {what}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(&format!("'{t}' is not a number")));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0 && b >= a && a.is_finite() && b.is_finite()) {
                return Err(bad("need a <= b and step > 0"));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize + 1;
            if n > 10_000 {
                return Err(bad("more than 10000 grid points"));
            }
            // Rounded so that 1.1:1.3:0.1 yields 1.2 rather than 1.2000000000000002.
            Ok((0..n).map(|k| ((a + k as f64 * step) * 1e12).round() / 1e12).collect())
        }
        [list] => {
            let v: Vec<f64> = list.split(',').map(num).collect::<Result<_, _>>()?;
            if v.is_empty() {
                return Err(bad("empty list"));
            }
            Ok(v)
        }
        _ => Err(bad("expected a:b:step or a comma list")),
    }
}

fn parse_suite(s: &str) -> Result<Vec<CheckKind>, Failure> {
    let mut kinds = Vec::new();
    for name in s.split(',').map(str::trim) {
        if name == "all" {
            kinds.extend(CheckKind::ALL);
        } else {
            kinds.push(name.parse::<CheckKind>().map_err(|e| usage(format!("--suite: {e}")))?);
        }
    }
    Ok(kinds)
}

fn load_config(args: &SuiteArgs) -> Result<TrialConfig, Failure> {
    let mut c = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("malformed config {}: {e}", path.display())))?
        }
        None => TrialConfig::default(),
    };
    if let Some(d) = args.dim {
        c.dim = d;
        if c.min_dim.is_some_and(|m| m > d) {
            c.min_dim = None;
        }
    }
    if let Some(m) = args.min_dim {
        c.min_dim = Some(m);
    }
    if let Some(t) = args.trials {
        c.trials = t;
    }
    if let Some(s) = args.seed {
        c.master_seed = s;
    }
    if let Some(p) = args.p {
        c.p_grid = vec![p];
    }
    if let Some(g) = &args.p_grid {
        c.p_grid = parse_grid("p-grid", g)?;
    }
    if let Some(g) = &args.alpha_grid {
        c.alpha_grid = parse_grid("alpha-grid", g)?;
    }
    if let Some(t) = args.tol {
        c.tolerance = t;
        c.tolerance_overrides.clear();
    }
    if let Some(e) = args.ensemble {
        c.ensemble = e;
    }
    if let Some(u) = args.unitaries {
        c.channel_unitaries = u;
    }
    c.validate()?;
    Ok(c)
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| usage(format!("--threads {threads}: {e}")))
}

fn dump_path(out: &Path, k: usize) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    out.with_file_name(format!("{stem}.violation.{k}.json"))
}

fn write_report(report: &SuiteReport, out: Option<&Path>, fmt: Option<Format>) -> Result<(), Failure> {
    let (Some(out), Some(fmt)) = (out, fmt) else { return Ok(()) };
    match fmt {
        Format::Json => write_file(out, &report.to_json()?)?,
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            write_file(out, &String::from_utf8(buf).expect("csv output is UTF-8"))?;
        }
    }
    for (k, dump) in report.violations.iter().enumerate() {
        write_file(&dump_path(out, k), &to_json(dump))?;
    }
    Ok(())
}

fn suite_outcome(report: &SuiteReport) -> Outcome {
    if report.violation_count() > 0 {
        Outcome::Violation
    } else if !report.errors.is_empty() {
        Outcome::NumericalError
    } else {
        Outcome::Passed
    }
}

fn run_verify(args: &SuiteArgs, sweep: bool) -> Result<Outcome, Failure> {
    let config = load_config(args)?;
    let default_suite = if sweep { "bcl" } else { "all" };
    let kinds = parse_suite(args.suite.as_deref().unwrap_or(default_suite))?;
    if sweep && args.p_grid.is_none() && args.p.is_none() && args.config.is_none() {
        return Err(usage("sweep needs --p-grid (or a --config with p_grid)"));
    }
    let out = args.common.out.as_deref();
    let fmt = output_format(out, &[Format::Json, Format::Csv])?;
    let pool = thread_pool(args.common.threads)?;

    let report = pool.install(|| run_suite(&config, &kinds))?;
    if sweep {
        print!("{}", sweep_table(&report));
    } else {
        print!("{}", report.summary_table());
    }
    for note in &report.notes {
        println!("note: {note}");
    }
    for e in &report.errors {
        eprintln!("trial error: {} param {} trial {}: {}", e.check, e.param, e.trial, e.message);
    }
    write_report(&report, out, fmt)?;
    println!(
        "{} records, {} violations, {} errors, {:.2}s",
        report.records.len(),
        report.violation_count(),
        report.errors.len(),
        report.wall_clock_seconds
    );
    Ok(suite_outcome(&report))
}

/// Worst normalized gap per parameter across every check.
fn sweep_table(report: &SuiteReport) -> String {
    let mut params: Vec<f64> = report.summaries.iter().map(|s| s.param).collect();
    params.sort_by(f64::total_cmp);
    params.dedup();
    let mut s = format!("{:>8} {:>12} {:<22} {:>6}\n", "param", "min gap", "attained by", "viol");
    for p in params {
        let rows: Vec<_> = report.summaries.iter().filter(|c| c.param == p && c.records > 0).collect();
        let Some(worst) = rows.iter().min_by(|a, b| a.min_normalized_gap.total_cmp(&b.min_normalized_gap)) else {
            continue;
        };
        let viol: usize = rows.iter().map(|c| c.violations).sum();
        s.push_str(&format!("{p:>8.4} {:>12.3e} {:<22} {viol:>6}\n", worst.min_normalized_gap, worst.check));
    }
    s
}

fn read_matrix(path: &Path) -> Result<SelfAdjointMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let m = ComplexMatrix::from_json(&text).map_err(|e| usage(format!("malformed matrix {}: {e}", path.display())))?;
    Ok(SelfAdjointMatrix::new(m)?)
}

#[derive(Serialize)]
struct SecondDerivReport {
    p: f64,
    dim: usize,
    seed: u64,
    step: f64,
    psi: f64,
    psi_first: f64,
    psi_second: f64,
    second_derivative: f64,
    lower_bound: f64,
    gap: f64,
    normalized_gap: f64,
    finite_difference: f64,
    relative_fd_error: f64,
    trace_second_derivative: f64,
    trace_second_derivative_fd: f64,
    a: ComplexMatrix,
    b: ComplexMatrix,
}

fn run_second_deriv(args: &SecondDerivArgs) -> Result<Outcome, Failure> {
    if !(args.p > 1.0 && args.p <= 2.0) {
        return Err(usage(format!("--p {}: must lie in (1, 2]", args.p)));
    }
    if args.dim == 0 {
        return Err(usage("--dim must be at least 1"));
    }
    if !(args.step > 0.0 && args.step.is_finite()) {
        return Err(usage(format!("--step {}: must be positive", args.step)));
    }
    output_format(args.common.out.as_deref(), &[Format::Json])?;
    let a = match &args.a {
        Some(path) => read_matrix(path)?,
        None => sample_indefinite_invertible(args.dim, sub_seed(args.seed, 0), 1e-2)?,
    };
    let b = match &args.b {
        Some(path) => read_matrix(path)?,
        None => SelfAdjointMatrix::hermitize(&sample_matrix(Ensemble::SelfAdjoint, a.dim(), sub_seed(args.seed, 1))),
    };
    if a.dim() != b.dim() {
        return Err(usage(format!("A is {}x{} but B is {}x{}", a.dim(), a.dim(), b.dim(), b.dim())));
    }

    let d = norm_sq_second_derivative(args.p, &a, &b)?;
    let fd = norm_sq_fd(args.p, &a, &b, args.step)?;
    let f = ScalarFunction::PowerAbs(args.p);
    let tsd = trace_second_derivative(&f, &a, &b)?;
    let tsd_fd = fd_oracle(&f, &a, &b, 2, args.step)?;
    let norm_a = schatten_norm(a.as_matrix(), args.p)?;
    let norm_b = schatten_norm(b.as_matrix(), args.p)?;
    let normalizer = norm_a.powf(args.p - 2.0) * norm_b * norm_b;
    let gap = d.value - d.lower_bound;
    let report = SecondDerivReport {
        p: args.p,
        dim: a.dim(),
        seed: args.seed,
        step: args.step,
        psi: d.psi,
        psi_first: d.psi_first,
        psi_second: d.psi_second,
        second_derivative: d.value,
        lower_bound: d.lower_bound,
        gap,
        normalized_gap: gap / normalizer,
        finite_difference: fd,
        relative_fd_error: (d.value - fd).abs() / d.value.abs().max(1.0),
        trace_second_derivative: tsd,
        trace_second_derivative_fd: tsd_fd,
        a: a.as_matrix().clone(),
        b: b.as_matrix().clone(),
    };
    println!("p = {}, dim = {}", report.p, report.dim);
    println!("  d2/dt2 ||A+tB||_p^2   {:>16.10e}", report.second_derivative);
    println!("  finite difference     {:>16.10e}  (relative error {:.2e})", fd, report.relative_fd_error);
    println!("  p(p-1)||A||^(p-2)||B||^2 {:>13.10e}", report.lower_bound);
    println!("  normalized gap        {:>16.10e}", report.normalized_gap);
    println!("  Tr f''(A)[B,B]        {:>16.10e}  (finite difference {:.10e})", tsd, tsd_fd);
    if let Some(out) = &args.common.out {
        write_file(out, &to_json(&report))?;
    }
    Ok(if report.normalized_gap < -args.tol { Outcome::Violation } else { Outcome::Passed })
}

#[derive(Serialize)]
struct TightnessReport<'a> {
    p: f64,
    fitted_constant: f64,
    points: &'a [TightnessPoint],
}

fn run_tightness(args: &TightnessArgs) -> Result<Outcome, Failure> {
    let eps = parse_grid("eps", &args.eps)?;
    let fmt = output_format(args.common.out.as_deref(), &[Format::Json, Format::Csv])?;
    let points = tightness_scan(args.p, &eps)?;
    let c = fit_tightness_constant(&points);
    println!("{:>10} {:>20} {:>12} {:>12}", "eps", "rho", "rho-(p-1)", "norm. gap");
    for q in &points {
        println!("{:>10.1e} {:>20.15} {:>12.3e} {:>12.3e}", q.eps, q.rho, q.deviation, q.record.normalized_gap);
    }
    println!("p - 1 = {}, fitted C in rho-(p-1) ~ C eps^2: {c:.6}", args.p - 1.0);
    if let (Some(out), Some(fmt)) = (&args.common.out, fmt) {
        match fmt {
            Format::Json => write_file(out, &to_json(&TightnessReport { p: args.p, fitted_constant: c, points: &points }))?,
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| usage(format!("cannot write {}: {e}", out.display()));
                w.write_record(["p", "eps", "rho", "deviation", "normalized_gap"]).map_err(io)?;
                for q in &points {
                    w.write_record([
                        q.p.to_string(),
                        format!("{:e}", q.eps),
                        q.rho.to_string(),
                        format!("{:e}", q.deviation),
                        format!("{:e}", q.record.normalized_gap),
                    ])
                    .map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| usage(e.to_string()))?;
                write_file(out, &String::from_utf8(bytes).expect("csv output is UTF-8"))?;
            }
        }
    }
    let violated = points.iter().any(|q| q.record.normalized_gap < -args.tol);
    Ok(if violated { Outcome::Violation } else { Outcome::Passed })
}

#[derive(Serialize)]
struct ExtremalReport<'a> {
    p: f64,
    dim: usize,
    iters: usize,
    restarts: usize,
    seed: u64,
    #[serde(flatten)]
    result: &'a ExtremalResult,
}

fn run_extremal(args: &ExtremalArgs) -> Result<Outcome, Failure> {
    if !(args.p > 1.0 && args.p <= 2.0) {
        return Err(usage(format!("--p {}: must lie in (1, 2]", args.p)));
    }
    output_format(args.common.out.as_deref(), &[Format::Json])?;
    let r = extremal_search(args.p, args.dim, args.iters, args.restarts, args.seed)?;
    println!(
        "best normalized gap {:.6e} (restart {}, {} evaluations, {} accepted moves)",
        r.best.normalized_gap, r.restart, r.evaluations, r.accepted
    );
    if let Some(out) = &args.common.out {
        let report = ExtremalReport {
            p: args.p,
            dim: args.dim,
            iters: args.iters,
            restarts: args.restarts,
            seed: args.seed,
            result: &r,
        };
        write_file(out, &to_json(&report))?;
    }
    Ok(if r.best.normalized_gap < -args.tol { Outcome::Violation } else { Outcome::Passed })
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Verify(a) => run_verify(a, false),
        Command::Sweep(a) => run_verify(a, true),
        Command::SecondDeriv(a) => run_second_deriv(a),
        Command::Tightness(a) => run_tightness(a),
        Command::Extremal(a) => run_extremal(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match dispatch(&cli) {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Ok(Outcome::NumericalError) => ExitCode::from(3),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical error: {msg}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("p", "1.1:1.3:0.1").unwrap(), vec![1.1, 1.2, 1.3]);
        assert_eq!(parse_grid("p", "1.5,2,3").unwrap(), vec![1.5, 2.0, 3.0]);
        assert!(parse_grid("p", "2:1:0.1").is_err());
        assert!(parse_grid("p", "1:2").is_err());
        assert!(parse_grid("p", "x").is_err());
    }

    #[test]
    fn suites_and_paths() {
        assert_eq!(parse_suite("all").unwrap().len(), 7);
        assert_eq!(parse_suite("bcl,fp").unwrap(), vec![CheckKind::Bcl, CheckKind::Fp]);
        assert!(parse_suite("bcl,nope").is_err());
        assert_eq!(dump_path(Path::new("/t/report.json"), 3), PathBuf::from("/t/report.violation.3.json"));
        assert!(output_format(Some(Path::new("r.txt")), &[Format::Json]).is_err());
        assert!(output_format(Some(Path::new("r.csv")), &[Format::Json]).is_err());
    }
}
