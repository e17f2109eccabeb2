//! Gradient-descent iteration with pluggable steplength strategies.
//!
//! The loop is the plain `x_{k+1} = x_k - alpha_k * g_k` update. The first
//! step uses a fixed bootstrap steplength (no secant pair exists yet); every
//! later step builds a [`SecantPair`] from the last two iterates and asks the
//! configured method for a steplength. With `Safeguard::None` the raw formula
//! value is applied as-is, negative steplengths included.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::steplength::{bb1, bb2, bb3, SecantPair, Steplength};
use crate::vecops::{all_finite, distance, norm, sub};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    /// The steplength formula is undefined on the current pair and no
    /// safeguard is active.
    #[error("degenerate step: the steplength formula is undefined on this secant pair")]
    DegenerateStep,
    /// Target-distance stopping was requested on a problem without a known
    /// minimizer.
    #[error("target-distance stopping requires a problem with a known minimizer")]
    MissingMinimizer,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Steplength strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bb1,
    Bb2,
    Bb3,
    /// Always apply the bootstrap steplength `alpha0`.
    Fixed,
}

impl Method {
    pub const ALL_BB: [Method; 3] = [Method::Bb1, Method::Bb2, Method::Bb3];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Bb1 => "bb1",
            Method::Bb2 => "bb2",
            Method::Bb3 => "bb3",
            Method::Fixed => "fixed",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bb1" => Ok(Method::Bb1),
            "bb2" => Ok(Method::Bb2),
            "bb3" => Ok(Method::Bb3),
            "fixed" => Ok(Method::Fixed),
            other => Err(format!(
                "unknown method `{other}` (expected bb1, bb2, bb3 or fixed)"
            )),
        }
    }
}

/// Termination test applied to every iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StoppingRule {
    /// Stop once `|x - x*| <= epsilon`; requires the problem to carry its
    /// minimizer.
    TargetDistance { epsilon: f64 },
    /// Stop once `|g| <= epsilon`.
    GradientNorm { epsilon: f64 },
}

impl StoppingRule {
    pub fn epsilon(&self) -> f64 {
        match self {
            StoppingRule::TargetDistance { epsilon } | StoppingRule::GradientNorm { epsilon } => {
                *epsilon
            }
        }
    }
}

/// Policy for unusable steplength proposals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Safeguard {
    /// Apply the raw formula value, negative steplengths included; a formula
    /// that is undefined (`sy = 0` exactly) terminates the run as degenerate.
    None,
    /// Reuse the previous steplength whenever the formula is undefined or
    /// yields a nonpositive or non-finite value.
    FallbackOnDegenerate,
    /// Project proposals onto `[min, max]`; an undefined formula falls back
    /// to the previous steplength before projecting.
    Clamp { min: f64, max: f64 },
}

/// Full specification of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    /// Bootstrap steplength for the first update, fallback value for
    /// safeguards, and the constant step of `Method::Fixed`.
    pub alpha0: f64,
    pub max_iter: usize,
    pub stopping: StoppingRule,
    pub safeguard: Safeguard,
}

type ObjectiveFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradientFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// An objective with its gradient, a canonical start point, and optionally
/// a known minimizer.
pub struct Problem {
    name: String,
    dim: usize,
    f: ObjectiveFn,
    grad: GradientFn,
    start: Vec<f64>,
    minimizer: Option<Vec<f64>>,
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        start: Vec<f64>,
    ) -> Self {
        assert!(dim >= 1, "problems must have dimension >= 1");
        assert_eq!(start.len(), dim, "start point must have length dim");
        Problem {
            name: name.into(),
            dim,
            f: Box::new(f),
            grad: Box::new(grad),
            start,
            minimizer: None,
        }
    }

    pub fn with_minimizer(mut self, minimizer: Vec<f64>) -> Self {
        assert_eq!(minimizer.len(), self.dim, "minimizer must have length dim");
        self.minimizer = Some(minimizer);
        self
    }

    pub fn with_start(mut self, start: Vec<f64>) -> Self {
        assert_eq!(start.len(), self.dim, "start point must have length dim");
        self.start = start;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        (self.grad)(x)
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn minimizer(&self) -> Option<&[f64]> {
        self.minimizer.as_deref()
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("start", &self.start)
            .field("minimizer", &self.minimizer)
            .finish()
    }
}

/// One row of the iteration trace. `alpha` is the steplength that produced
/// this iterate; the start point (`k = 0`) has none.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub x: Vec<f64>,
    pub f_value: f64,
    pub grad_norm: f64,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Converged,
    MaxIter,
    Diverged,
    Degenerate,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Converged => "converged",
            RunStatus::MaxIter => "max-iter",
            RunStatus::Diverged => "diverged",
            RunStatus::Degenerate => "degenerate",
        })
    }
}

impl FromStr for RunStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "converged" => Ok(RunStatus::Converged),
            "max-iter" => Ok(RunStatus::MaxIter),
            "diverged" => Ok(RunStatus::Diverged),
            "degenerate" => Ok(RunStatus::Degenerate),
            other => Err(format!("unknown run status `{other}`")),
        }
    }
}

/// Outcome of a run: terminal status, number of x-updates performed, the
/// full trace, and the last iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub status: RunStatus,
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
    pub final_x: Vec<f64>,
}

/// The bootstrap update `x0 - alpha0 * g0`, taken before any secant pair
/// exists. Counts as iteration 1.
pub fn first_step(x0: &[f64], g0: &[f64], alpha0: f64) -> Result<Vec<f64>, EngineError> {
    if !(alpha0 > 0.0) || !alpha0.is_finite() {
        return Err(EngineError::InvalidConfig(format!(
            "alpha0 must be a positive finite number, got {alpha0}"
        )));
    }
    if x0.len() != g0.len() {
        return Err(EngineError::InvalidConfig(
            "first_step: point and gradient dimensions differ".into(),
        ));
    }
    Ok(x0.iter().zip(g0).map(|(x, g)| x - alpha0 * g).collect())
}

/// Evaluates the stopping rule at an iterate.
pub fn check_stop(
    x: &[f64],
    g: &[f64],
    rule: &StoppingRule,
    problem: &Problem,
) -> Result<bool, EngineError> {
    match rule {
        StoppingRule::TargetDistance { epsilon } => {
            let target = problem.minimizer().ok_or(EngineError::MissingMinimizer)?;
            Ok(distance(x, target) <= *epsilon)
        }
        StoppingRule::GradientNorm { epsilon } => Ok(norm(g) <= *epsilon),
    }
}

fn raw_formula(method: Method, pair: &SecantPair, config: &SolverConfig) -> Option<f64> {
    match method {
        Method::Bb1 => bb1(pair).ok().map(Steplength::value),
        Method::Bb2 => bb2(pair).ok().map(Steplength::value),
        Method::Bb3 => bb3(pair).ok().map(Steplength::value),
        Method::Fixed => Some(config.alpha0),
    }
}

/// Applies the method's formula to the pair and the configured safeguard to
/// the outcome.
///
/// With `Safeguard::None` the raw value is passed through (negative values
/// included) and an undefined formula is a [`EngineError::DegenerateStep`].
/// `FallbackOnDegenerate` substitutes `prev_alpha` for undefined, nonpositive
/// or non-finite proposals. `Clamp` projects proposals onto `[min, max]`,
/// projecting `prev_alpha` instead when the formula is undefined.
pub fn propose_steplength(
    method: Method,
    pair: &SecantPair,
    prev_alpha: Steplength,
    config: &SolverConfig,
) -> Result<Steplength, EngineError> {
    let raw = raw_formula(method, pair, config);
    let value = match config.safeguard {
        Safeguard::None => raw.ok_or(EngineError::DegenerateStep)?,
        Safeguard::FallbackOnDegenerate => match raw {
            Some(v) if v > 0.0 && v.is_finite() => v,
            _ => prev_alpha.value(),
        },
        Safeguard::Clamp { min, max } => match raw {
            Some(v) if v.is_finite() => v.clamp(min, max),
            _ => prev_alpha.value().clamp(min, max),
        },
    };
    Ok(Steplength::new(value))
}

fn validate(problem: &Problem, config: &SolverConfig) -> Result<(), EngineError> {
    if !(config.alpha0 > 0.0) || !config.alpha0.is_finite() {
        return Err(EngineError::InvalidConfig(format!(
            "alpha0 must be a positive finite number, got {}",
            config.alpha0
        )));
    }
    if config.max_iter < 1 {
        return Err(EngineError::InvalidConfig("max_iter must be >= 1".into()));
    }
    let eps = config.stopping.epsilon();
    if !(eps > 0.0) {
        return Err(EngineError::InvalidConfig(format!(
            "stopping tolerance must be positive, got {eps}"
        )));
    }
    if let Safeguard::Clamp { min, max } = config.safeguard {
        if !(0.0 < min && min < max) {
            return Err(EngineError::InvalidConfig(format!(
                "clamp bounds must satisfy 0 < min < max, got [{min}, {max}]"
            )));
        }
    }
    if matches!(config.stopping, StoppingRule::TargetDistance { .. })
        && problem.minimizer().is_none()
    {
        return Err(EngineError::MissingMinimizer);
    }
    Ok(())
}

/// Runs gradient descent on the problem from its start point.
///
/// Returns an error only for configurations that are invalid up front;
/// every runtime failure mode (divergence, degenerate pair, iteration cap)
/// is reported as a [`RunStatus`] in the result.
pub fn run(problem: &Problem, config: &SolverConfig) -> Result<RunResult, EngineError> {
    validate(problem, config)?;

    let mut x = problem.start().to_vec();
    let mut g = problem.grad(&x);
    if g.len() != problem.dim() {
        return Err(EngineError::InvalidConfig(format!(
            "gradient evaluator returned length {} for a problem of dimension {}",
            g.len(),
            problem.dim()
        )));
    }
    let mut fx = problem.f(&x);
    let mut trace = vec![IterationRecord {
        k: 0,
        x: x.clone(),
        f_value: fx,
        grad_norm: norm(&g),
        alpha: None,
    }];
    let finish = |status, iterations, trace: Vec<IterationRecord>, x: Vec<f64>| {
        Ok(RunResult {
            status,
            iterations,
            trace,
            final_x: x,
        })
    };

    if !(all_finite(&x) && all_finite(&g) && fx.is_finite()) {
        return finish(RunStatus::Diverged, 0, trace, x);
    }
    if check_stop(&x, &g, &config.stopping, problem)? {
        return finish(RunStatus::Converged, 0, trace, x);
    }

    let mut x_prev = x.clone();
    let mut g_prev = g.clone();
    x = first_step(&x, &g, config.alpha0)?;
    fx = problem.f(&x);
    g = problem.grad(&x);
    let mut alpha = config.alpha0;
    let mut iterations = 1usize;
    trace.push(IterationRecord {
        k: 1,
        x: x.clone(),
        f_value: fx,
        grad_norm: norm(&g),
        alpha: Some(alpha),
    });

    loop {
        if !(all_finite(&x) && all_finite(&g) && fx.is_finite()) {
            return finish(RunStatus::Diverged, iterations, trace, x);
        }
        if check_stop(&x, &g, &config.stopping, problem)? {
            return finish(RunStatus::Converged, iterations, trace, x);
        }
        if iterations >= config.max_iter {
            return finish(RunStatus::MaxIter, iterations, trace, x);
        }

        let pair = SecantPair::new(sub(&x, &x_prev), sub(&g, &g_prev))
            .expect("consecutive iterates have equal dimension");
        match propose_steplength(config.method, &pair, Steplength::new(alpha), config) {
            Ok(a) => alpha = a.value(),
            Err(EngineError::DegenerateStep) => {
                return finish(RunStatus::Degenerate, iterations, trace, x);
            }
            Err(other) => return Err(other),
        }

        let x_next: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - alpha * gi).collect();
        x_prev = std::mem::replace(&mut x, x_next);
        g_prev = std::mem::replace(&mut g, problem.grad(&x));
        fx = problem.f(&x);
        iterations += 1;
        trace.push(IterationRecord {
            k: iterations,
            x: x.clone(),
            f_value: fx,
            grad_norm: norm(&g),
            alpha: Some(alpha),
        });
    }
}
