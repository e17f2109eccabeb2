//! Benchmark harness: configuration parsing, grid execution, and summary
//! and trace emission in machine- and human-readable form.
//!
//! The `table1` preset pins the planar Rosenbrock comparison: all three
//! steplengths, target-distance tolerances `{1e-1, 1e-2, 1e-4, 1e-8}`, a
//! 5000-iteration cap, no safeguard, and a sweep over bootstrap steplengths.
//! Its markdown output mirrors the published reference layout, rendering
//! `--` for runs that hit the iteration cap.

use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{
    self, EngineError, IterationRecord, Method, Problem, RunResult, RunStatus, Safeguard,
    SolverConfig, StoppingRule,
};
use crate::problems::{quadratic, rosenbrock, QuadraticSpec};
use crate::vecops::distance;

/// Default stopping tolerances, decreasing as in the reference table.
pub const DEFAULT_EPSILONS: [f64; 4] = [1e-1, 1e-2, 1e-4, 1e-8];
/// Default bootstrap steplength. Raw BB runs on Rosenbrock are sensitive to
/// this value; the `table1` preset sweeps it to keep that visible.
pub const DEFAULT_ALPHA0: f64 = 1e-3;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 5000;
/// Bootstrap steplengths swept by the `table1` preset.
pub const ALPHA0_SWEEP: [f64; 4] = [1e-4, 1e-3, 1e-2, 1e-1];

/// Reference iteration counts for the Rosenbrock comparison at
/// [`DEFAULT_EPSILONS`]; the bb2 column hit the iteration cap at every
/// tolerance. The bootstrap steplength behind these counts is not
/// documented, so measured counts need not match them exactly.
pub const REFERENCE_BB1_ITERATIONS: [usize; 4] = [154, 160, 166, 172];
/// See [`REFERENCE_BB1_ITERATIONS`].
pub const REFERENCE_BB3_ITERATIONS: [usize; 4] = [32, 38, 44, 46];

#[derive(Debug, Error)]
pub enum BenchError {
    /// Command-line arguments were rejected; the message names the
    /// offending flag.
    #[error("{0}")]
    Usage(String),
    /// `--help` or `--version` was requested; the message is the text to
    /// print.
    #[error("{0}")]
    Help(String),
    #[error("unknown problem `{0}` (expected rosenbrock or quadratic)")]
    UnknownProblem(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Stopping-rule selector; the tolerance itself comes from the epsilon grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopKind {
    /// Distance to the known minimizer. Problems without minimizer metadata
    /// fall back to the gradient norm.
    Target,
    GradNorm,
}

impl FromStr for StopKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "target" => Ok(StopKind::Target),
            "gradnorm" => Ok(StopKind::GradNorm),
            other => Err(format!("unknown stop rule `{other}` (expected target or gradnorm)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "md" => Ok(OutputFormat::Markdown),
            other => Err(format!("unknown format `{other}` (expected csv, json or md)")),
        }
    }
}

/// Fully resolved benchmark request: the grid, the solver policy, and where
/// results go.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub problem: String,
    pub methods: Vec<Method>,
    pub epsilons: Vec<f64>,
    pub max_iter: usize,
    pub alpha0s: Vec<f64>,
    pub safeguard: Safeguard,
    pub stop: StopKind,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub trace_dir: Option<PathBuf>,
    /// Print the reference iteration counts next to the measured ones
    /// (set by the `table1` preset).
    pub include_reference: bool,
}

impl BenchConfig {
    /// The pinned Rosenbrock comparison: three methods, four tolerances,
    /// no safeguard, target-distance stopping, bootstrap sweep.
    pub fn table1_preset() -> Self {
        BenchConfig {
            problem: "rosenbrock".into(),
            methods: Method::ALL_BB.to_vec(),
            epsilons: DEFAULT_EPSILONS.to_vec(),
            max_iter: DEFAULT_MAX_ITER,
            alpha0s: ALPHA0_SWEEP.to_vec(),
            safeguard: Safeguard::None,
            stop: StopKind::Target,
            out: None,
            format: OutputFormat::Markdown,
            trace_dir: None,
            include_reference: true,
        }
    }
}

/// One grid cell of the benchmark output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: Method,
    pub epsilon: f64,
    pub status: RunStatus,
    pub iterations: usize,
    /// Euclidean distance from the final iterate to the known minimizer;
    /// absent for problems without minimizer metadata.
    pub final_distance: Option<f64>,
    pub alpha0: f64,
}

#[derive(Parser, Debug)]
#[command(
    name = "bbbench",
    version,
    about = "Gradient-descent benchmark harness for Barzilai-Borwein steplengths",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<CliCommand>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Rosenbrock preset: bb1/bb2/bb3 at eps {1e-1,1e-2,1e-4,1e-8},
    /// max 5000 iterations, no safeguard, bootstrap sweep, reference counts
    Table1(Table1Args),
}

#[derive(Args, Debug)]
struct Table1Args {
    /// Write the summary to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary format: csv, json or md
    #[arg(long, default_value = "md")]
    format: String,
    /// Write one per-run trace csv per grid cell into this directory
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Problem to benchmark: rosenbrock or quadratic
    #[arg(long, default_value = "rosenbrock")]
    problem: String,
    /// Comma-separated methods: bb1, bb2, bb3, fixed
    #[arg(long, value_delimiter = ',', default_value = "bb1,bb2,bb3")]
    methods: Vec<String>,
    /// Comma-separated stopping tolerances
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_EPSILONS)]
    eps: Vec<f64>,
    /// Iteration cap per run
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Comma-separated bootstrap steplengths
    #[arg(long, value_delimiter = ',', default_values_t = [DEFAULT_ALPHA0])]
    alpha0: Vec<f64>,
    /// Steplength safeguard: none, fallback, or clamp:min,max
    #[arg(long, default_value = "none")]
    safeguard: String,
    /// Stopping rule: target (distance to minimizer) or gradnorm
    #[arg(long, default_value = "target")]
    stop: String,
    /// Write the summary to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary format: csv, json or md
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write one per-run trace csv per grid cell into this directory
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

fn parse_safeguard(s: &str) -> Result<Safeguard, String> {
    match s {
        "none" => Ok(Safeguard::None),
        "fallback" => Ok(Safeguard::FallbackOnDegenerate),
        other => {
            let spec = other
                .strip_prefix("clamp:")
                .ok_or_else(|| format!("unknown safeguard `{other}` (expected none, fallback or clamp:min,max)"))?;
            let (min, max) = spec
                .split_once(',')
                .ok_or_else(|| format!("clamp bounds must be `min,max`, got `{spec}`"))?;
            let min: f64 = min.trim().parse().map_err(|_| format!("bad clamp minimum `{min}`"))?;
            let max: f64 = max.trim().parse().map_err(|_| format!("bad clamp maximum `{max}`"))?;
            if !(0.0 < min && min < max) {
                return Err(format!("clamp bounds must satisfy 0 < min < max, got [{min}, {max}]"));
            }
            Ok(Safeguard::Clamp { min, max })
        }
    }
}

fn usage(flag: &str, message: impl fmt::Display) -> BenchError {
    BenchError::Usage(format!("{flag}: {message}"))
}

/// Parses command-line arguments (without the program name) into a
/// [`BenchConfig`]. Unknown flags and invariant violations are rejected
/// with the offending flag named.
pub fn parse_config(argv: &[String]) -> Result<BenchConfig, BenchError> {
    let cli = Cli::try_parse_from(std::iter::once("bbbench".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => BenchError::Help(e.to_string()),
            _ => BenchError::Usage(e.to_string()),
        })?;

    if let Some(CliCommand::Table1(args)) = cli.command {
        let mut config = BenchConfig::table1_preset();
        config.format = args.format.parse().map_err(|e| usage("--format", e))?;
        config.out = args.out;
        config.trace_dir = args.trace_dir;
        return Ok(config);
    }

    let grid = cli.grid;
    let methods = grid
        .methods
        .iter()
        .map(|m| m.parse::<Method>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage("--methods", e))?;
    if methods.is_empty() {
        return Err(usage("--methods", "at least one method is required"));
    }
    if grid.eps.is_empty() {
        return Err(usage("--eps", "at least one tolerance is required"));
    }
    if let Some(bad) = grid.eps.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(usage("--eps", format!("tolerances must be positive, got {bad}")));
    }
    if grid.alpha0.is_empty() {
        return Err(usage("--alpha0", "at least one bootstrap steplength is required"));
    }
    if let Some(bad) = grid.alpha0.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
        return Err(usage(
            "--alpha0",
            format!("bootstrap steplengths must be positive, got {bad}"),
        ));
    }
    if grid.max_iter < 1 {
        return Err(usage("--max-iter", "iteration cap must be at least 1"));
    }

    Ok(BenchConfig {
        problem: grid.problem,
        methods,
        epsilons: grid.eps,
        max_iter: grid.max_iter,
        alpha0s: grid.alpha0,
        safeguard: parse_safeguard(&grid.safeguard).map_err(|e| usage("--safeguard", e))?,
        stop: grid.stop.parse().map_err(|e| usage("--stop", e))?,
        out: grid.out,
        format: grid.format.parse().map_err(|e| usage("--format", e))?,
        trace_dir: grid.trace_dir,
        include_reference: false,
    })
}

/// Resolves a problem id from the built-in registry.
pub fn builtin_problem(id: &str) -> Result<Problem, BenchError> {
    match id {
        "rosenbrock" => Ok(rosenbrock()),
        "quadratic" => Ok(quadratic(&QuadraticSpec {
            diag: vec![1.0, 10.0],
            shift: vec![0.0, 0.0],
        })
        .expect("built-in spec is valid")),
        other => Err(BenchError::UnknownProblem(other.to_string())),
    }
}

fn trace_filename(problem: &str, method: Method, epsilon: f64, alpha0: f64) -> String {
    format!("{problem}_{method}_eps{epsilon:e}_alpha{alpha0:e}.csv")
}

/// Runs the full (method, epsilon, alpha0) grid on the configured built-in
/// problem. Engine outcomes are recorded as row data; no run aborts the grid.
pub fn run_benchmark(config: &BenchConfig) -> Result<Vec<SummaryRow>, BenchError> {
    let problem = builtin_problem(&config.problem)?;
    run_benchmark_on(&problem, config)
}

/// [`run_benchmark`] against a caller-supplied problem. Rows are sorted by
/// method, then epsilon (decreasing, mirroring the reference table), then
/// alpha0.
pub fn run_benchmark_on(
    problem: &Problem,
    config: &BenchConfig,
) -> Result<Vec<SummaryRow>, BenchError> {
    let mut methods = config.methods.clone();
    methods.sort();
    methods.dedup();
    let mut epsilons = config.epsilons.clone();
    epsilons.sort_by(|a, b| b.total_cmp(a));
    epsilons.dedup();
    let mut alpha0s = config.alpha0s.clone();
    alpha0s.sort_by(f64::total_cmp);
    alpha0s.dedup();

    if let Some(dir) = &config.trace_dir {
        fs::create_dir_all(dir)?;
    }

    let mut rows = Vec::with_capacity(methods.len() * epsilons.len() * alpha0s.len());
    for &method in &methods {
        for &epsilon in &epsilons {
            for &alpha0 in &alpha0s {
                let stopping = match (config.stop, problem.minimizer()) {
                    (StopKind::Target, Some(_)) => StoppingRule::TargetDistance { epsilon },
                    _ => StoppingRule::GradientNorm { epsilon },
                };
                let solver = SolverConfig {
                    method,
                    alpha0,
                    max_iter: config.max_iter,
                    stopping,
                    safeguard: config.safeguard,
                };
                let result = engine::run(problem, &solver)?;
                if let Some(dir) = &config.trace_dir {
                    let path = dir.join(trace_filename(problem.name(), method, epsilon, alpha0));
                    emit_trace(&result, &path)?;
                }
                rows.push(SummaryRow {
                    method,
                    epsilon,
                    status: result.status,
                    iterations: result.iterations,
                    final_distance: problem
                        .minimizer()
                        .map(|target| distance(&result.final_x, target)),
                    alpha0,
                });
            }
        }
    }
    Ok(rows)
}

/// Renders rows in the requested format.
pub fn render_summary(rows: &[SummaryRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => render_summary_csv(rows),
        OutputFormat::Json => render_summary_json(rows),
        OutputFormat::Markdown => render_summary_markdown(rows),
    }
}

/// Csv with columns `method,epsilon,status,iterations,final_distance,alpha0`.
pub fn render_summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("method,epsilon,status,iterations,final_distance,alpha0\n");
    for r in rows {
        let final_distance = r
            .final_distance
            .map(|d| d.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.method, r.epsilon, r.status, r.iterations, final_distance, r.alpha0
        );
    }
    out
}

/// Json array of row objects with the same field names as the csv columns.
pub fn render_summary_json(rows: &[SummaryRow]) -> String {
    let mut text = serde_json::to_string_pretty(rows).expect("rows serialize");
    text.push('\n');
    text
}

fn status_cell(row: &SummaryRow) -> String {
    match row.status {
        RunStatus::Converged => row.iterations.to_string(),
        RunStatus::MaxIter => "--".to_string(),
        RunStatus::Diverged => "div".to_string(),
        RunStatus::Degenerate => "deg".to_string(),
    }
}

/// Markdown tables with methods as columns and epsilons as rows, one table
/// per alpha0 value; `--` marks runs that hit the iteration cap.
pub fn render_summary_markdown(rows: &[SummaryRow]) -> String {
    let mut alpha0s: Vec<f64> = Vec::new();
    let mut methods: Vec<Method> = Vec::new();
    let mut epsilons: Vec<f64> = Vec::new();
    for r in rows {
        if !alpha0s.contains(&r.alpha0) {
            alpha0s.push(r.alpha0);
        }
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
        if !epsilons.contains(&r.epsilon) {
            epsilons.push(r.epsilon);
        }
    }

    let mut out = String::new();
    for (i, &alpha0) in alpha0s.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if alpha0s.len() > 1 {
            let _ = writeln!(out, "## alpha0 = {alpha0:e}\n");
        }
        let _ = write!(out, "| epsilon |");
        for m in &methods {
            let _ = write!(out, " {m} |");
        }
        out.push('\n');
        let _ = write!(out, "| --- |{}", " --- |".repeat(methods.len()));
        out.push('\n');
        for &epsilon in &epsilons {
            let _ = write!(out, "| {epsilon:e} |");
            for &m in &methods {
                let cell = rows
                    .iter()
                    .find(|r| r.method == m && r.epsilon == epsilon && r.alpha0 == alpha0)
                    .map(status_cell)
                    .unwrap_or_default();
                let _ = write!(out, " {cell} |");
            }
            out.push('\n');
        }
    }
    out
}

/// The published reference counts in the same markdown layout.
pub fn render_reference_markdown() -> String {
    let mut out = String::from("| epsilon | bb1 | bb2 | bb3 |\n| --- | --- | --- | --- |\n");
    for (i, eps) in DEFAULT_EPSILONS.iter().enumerate() {
        let _ = writeln!(
            out,
            "| {eps:e} | {} | -- | {} |",
            REFERENCE_BB1_ITERATIONS[i], REFERENCE_BB3_ITERATIONS[i]
        );
    }
    out
}

/// Writes the rendered summary to `path`.
pub fn emit_summary(
    rows: &[SummaryRow],
    format: OutputFormat,
    path: &Path,
) -> Result<(), BenchError> {
    fs::write(path, render_summary(rows, format))?;
    Ok(())
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Csv trace with columns `k,x1..xn,f,grad_norm,alpha`, every value printed
/// with 17 significant digits so parsing reproduces the run bit for bit.
/// `alpha` is empty on the `k = 0` row.
pub fn render_trace(records: &[IterationRecord]) -> String {
    let dim = records.first().map_or(0, |r| r.x.len());
    let mut out = String::from("k");
    for i in 1..=dim {
        let _ = write!(out, ",x{i}");
    }
    out.push_str(",f,grad_norm,alpha\n");
    for r in records {
        let _ = write!(out, "{}", r.k);
        for xi in &r.x {
            let _ = write!(out, ",{}", fmt17(*xi));
        }
        let alpha = r.alpha.map(fmt17).unwrap_or_default();
        let _ = writeln!(out, ",{},{},{}", fmt17(r.f_value), fmt17(r.grad_norm), alpha);
    }
    out
}

/// Writes the run's trace to `path`.
pub fn emit_trace(result: &RunResult, path: &Path) -> Result<(), BenchError> {
    fs::write(path, render_trace(&result.trace))?;
    Ok(())
}

fn parse_field<T: FromStr>(field: &str, line: usize, what: &str) -> Result<T, BenchError>
where
    T::Err: fmt::Display,
{
    field.parse().map_err(|e| BenchError::Parse {
        line,
        message: format!("bad {what} `{field}`: {e}"),
    })
}

/// Parses a summary csv produced by [`render_summary_csv`].
pub fn parse_summary_csv(text: &str) -> Result<Vec<SummaryRow>, BenchError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(BenchError::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    if header != "method,epsilon,status,iterations,final_distance,alpha0" {
        return Err(BenchError::Parse {
            line: 1,
            message: format!("unexpected header `{header}`"),
        });
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(BenchError::Parse {
                line: line_no,
                message: format!("expected 6 fields, got {}", fields.len()),
            });
        }
        let final_distance = if fields[4].is_empty() {
            None
        } else {
            Some(parse_field(fields[4], line_no, "final_distance")?)
        };
        rows.push(SummaryRow {
            method: parse_field(fields[0], line_no, "method")?,
            epsilon: parse_field(fields[1], line_no, "epsilon")?,
            status: parse_field(fields[2], line_no, "status")?,
            iterations: parse_field(fields[3], line_no, "iterations")?,
            final_distance,
            alpha0: parse_field(fields[5], line_no, "alpha0")?,
        });
    }
    Ok(rows)
}

/// Parses a trace csv produced by [`render_trace`].
pub fn parse_trace_csv(text: &str) -> Result<Vec<IterationRecord>, BenchError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(BenchError::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 4 || columns[0] != "k" || !header.ends_with(",f,grad_norm,alpha") {
        return Err(BenchError::Parse {
            line: 1,
            message: format!("unexpected trace header `{header}`"),
        });
    }
    let dim = columns.len() - 4;
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 4 {
            return Err(BenchError::Parse {
                line: line_no,
                message: format!("expected {} fields, got {}", dim + 4, fields.len()),
            });
        }
        let x = fields[1..1 + dim]
            .iter()
            .map(|f| parse_field(f, line_no, "coordinate"))
            .collect::<Result<Vec<f64>, _>>()?;
        let alpha_field = fields[dim + 3];
        let alpha = if alpha_field.is_empty() {
            None
        } else {
            Some(parse_field(alpha_field, line_no, "alpha")?)
        };
        records.push(IterationRecord {
            k: parse_field(fields[0], line_no, "k")?,
            x,
            f_value: parse_field(fields[dim + 1], line_no, "f")?,
            grad_norm: parse_field(fields[dim + 2], line_no, "grad_norm")?,
            alpha,
        });
    }
    Ok(records)
}
