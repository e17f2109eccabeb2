//! Brute-force verifiers that check the closed forms from the outside.
//!
//! [`minimize_scalar`] never touches the steplength formulas: it locates a
//! minimizer by grid scan plus golden-section refinement, which makes it an
//! independent reference for [`verify_bb3`] and the property suites.

use thiserror::Error;

use crate::steplength::{bb2, bb3, tls_objective, SecantPair, SteplengthError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid bracket: lo = {lo} must be < hi = {hi}")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Degenerate(#[from] SteplengthError),
}

const GRID_POINTS: usize = 1000;
// (sqrt(5) - 1) / 2, the golden-section interior ratio
const INVPHI: f64 = 0.618_033_988_749_894_8;

/// Locates a minimizer of `f` on `[lo, hi]` to within `tol`: a coarse scan
/// over `GRID_POINTS` samples picks the best cell, then golden-section
/// search shrinks that cell. Exact for unimodal functions; best-of-grid
/// refinement otherwise.
pub fn minimize_scalar(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, OracleError> {
    if !(lo < hi) {
        return Err(OracleError::InvalidBracket { lo, hi });
    }
    if !(tol > 0.0) {
        return Err(OracleError::InvalidTolerance(tol));
    }

    let step = (hi - lo) / GRID_POINTS as f64;
    let mut best_i = 0usize;
    let mut best_f = f64::INFINITY;
    for i in 0..=GRID_POINTS {
        let x = lo + step * i as f64;
        let fx = f(x);
        if fx < best_f {
            best_f = fx;
            best_i = i;
        }
    }
    // refine inside the two cells around the best sample
    let mut a = lo + step * best_i.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_i + 1) as f64).min(hi);

    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut rounds = 0;
    while (b - a) > tol && rounds < 1000 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        }
        rounds += 1;
    }
    Ok(0.5 * (a + b))
}

/// Side-by-side comparison of the closed-form total-least-squares
/// steplength against the search oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Bb3Report {
    pub closed_form: f64,
    pub oracle: f64,
    pub agree: bool,
}

/// Minimizes the total-least-squares misfit by search over `[0, 2 * bb2]`
/// (the ordering guarantee keeps the true minimizer inside) and compares
/// the result with the closed form at relative tolerance `tol`.
pub fn verify_bb3(pair: &SecantPair, tol: f64) -> Result<Bb3Report, OracleError> {
    if !(tol > 0.0) {
        return Err(OracleError::InvalidTolerance(tol));
    }
    let closed_form = bb3(pair)?.value();
    let upper = 2.0 * bb2(pair)?.value();
    let scale = f64::max(1.0, closed_form.abs());
    let oracle = minimize_scalar(
        |alpha| tls_objective(alpha, pair),
        0.0,
        upper,
        (0.1 * tol * scale).min(upper * 0.25),
    )?;
    let agree = (closed_form - oracle).abs() <= tol * scale;
    Ok(Bb3Report {
        closed_form,
        oracle,
        agree,
    })
}
