//! Built-in test problems and a finite-difference gradient verifier.

use thiserror::Error;

use crate::engine::Problem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("invalid quadratic spec: {0}")]
    InvalidSpec(String),
}

/// Diagonal SPD quadratic `0.5 x' diag(d) x - b' x`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSpec {
    /// Positive eigenvalues of the diagonal matrix.
    pub diag: Vec<f64>,
    /// Linear term.
    pub shift: Vec<f64>,
}

/// The planar Rosenbrock valley `100 (x2 - x1^2)^2 + (1 - x1)^2` with its
/// analytic gradient, canonical start `(-1.2, 1)` and minimizer `(1, 1)`.
pub fn rosenbrock() -> Problem {
    Problem::new(
        "rosenbrock",
        2,
        |x| {
            let t = x[1] - x[0] * x[0];
            100.0 * t * t + (1.0 - x[0]) * (1.0 - x[0])
        },
        |x| {
            let t = x[1] - x[0] * x[0];
            vec![-400.0 * x[0] * t - 2.0 * (1.0 - x[0]), 200.0 * t]
        },
        vec![-1.2, 1.0],
    )
    .with_minimizer(vec![1.0, 1.0])
}

/// Builds the diagonal quadratic problem from its spec. The minimizer is
/// `b_i / d_i`; the default start point is all ones.
pub fn quadratic(spec: &QuadraticSpec) -> Result<Problem, ProblemError> {
    if spec.diag.is_empty() {
        return Err(ProblemError::InvalidSpec("diagonal must be nonempty".into()));
    }
    if spec.diag.len() != spec.shift.len() {
        return Err(ProblemError::InvalidSpec(format!(
            "diagonal has length {} but shift has length {}",
            spec.diag.len(),
            spec.shift.len()
        )));
    }
    if let Some(bad) = spec.diag.iter().find(|d| !(**d > 0.0)) {
        return Err(ProblemError::InvalidSpec(format!(
            "diagonal entries must be positive, got {bad}"
        )));
    }
    let dim = spec.diag.len();
    let diag_f = spec.diag.clone();
    let shift_f = spec.shift.clone();
    let diag_g = spec.diag.clone();
    let shift_g = spec.shift.clone();
    let minimizer: Vec<f64> = spec
        .shift
        .iter()
        .zip(&spec.diag)
        .map(|(b, d)| b / d)
        .collect();
    Ok(Problem::new(
        "quadratic",
        dim,
        move |x| {
            x.iter()
                .zip(&diag_f)
                .zip(&shift_f)
                .map(|((xi, di), bi)| 0.5 * di * xi * xi - bi * xi)
                .sum()
        },
        move |x| {
            x.iter()
                .zip(&diag_g)
                .zip(&shift_g)
                .map(|((xi, di), bi)| di * xi - bi)
                .collect()
        },
        vec![1.0; dim],
    )
    .with_minimizer(minimizer))
}

/// Central-difference gradient `(f(x + h e_i) - f(x - h e_i)) / (2h)` per
/// coordinate. Verification oracle for analytic gradients; `h` must be
/// positive.
pub fn finite_diff_grad(problem: &Problem, x: &[f64], h: f64) -> Vec<f64> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let plus = problem.f(&probe);
            probe[i] = x[i] - h;
            let minus = problem.f(&probe);
            probe[i] = x[i];
            (plus - minus) / (2.0 * h)
        })
        .collect()
}
