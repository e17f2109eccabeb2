//! The scalar-unknown least-squares triad.
//!
//! For an over-determined system `a * x ~ b` with a single unknown `x`,
//! three noise models give three closed forms: noise in `b` only
//! ([`scalar_ols`]), noise in `a` only ([`scalar_dls`]), and noise in both
//! ([`scalar_tls`]). Feeding `a = y`, `b = s` of a secant pair reproduces
//! the three Barzilai-Borwein steplengths exactly.

use thiserror::Error;

use crate::vecops::dot;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LeastSquaresError {
    /// The instance admits no finite stationary point for the requested fit.
    #[error("degenerate least-squares data: {0}")]
    DegenerateData(&'static str),
    #[error("dimension mismatch: a has length {a_len}, b has length {b_len}")]
    DimensionMismatch { a_len: usize, b_len: usize },
    #[error("least-squares vectors must have dimension >= 1")]
    Empty,
}

/// Data column `a` and observation vector `b` of a scalar-unknown system,
/// with `a.a`, `b.b`, `a.b` cached at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarLSInstance {
    a: Vec<f64>,
    b: Vec<f64>,
    aa: f64,
    bb: f64,
    ab: f64,
}

impl ScalarLSInstance {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self, LeastSquaresError> {
        if a.is_empty() || b.is_empty() {
            return Err(LeastSquaresError::Empty);
        }
        if a.len() != b.len() {
            return Err(LeastSquaresError::DimensionMismatch {
                a_len: a.len(),
                b_len: b.len(),
            });
        }
        let aa = dot(&a, &a);
        let bb = dot(&b, &b);
        let ab = dot(&a, &b);
        Ok(ScalarLSInstance { a, b, aa, bb, ab })
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }
}

/// Minimizer of `|a x - b|^2`: `a.b / a.a`.
pub fn scalar_ols(inst: &ScalarLSInstance) -> Result<f64, LeastSquaresError> {
    if inst.aa == 0.0 {
        return Err(LeastSquaresError::DegenerateData("a is the zero vector"));
    }
    Ok(inst.ab / inst.aa)
}

/// Minimizer of `|a x - b|^2 / x^2` over `x != 0`: `b.b / a.b`.
pub fn scalar_dls(inst: &ScalarLSInstance) -> Result<f64, LeastSquaresError> {
    if inst.ab == 0.0 {
        return Err(LeastSquaresError::DegenerateData(
            "a.b = 0 leaves no finite stationary point",
        ));
    }
    Ok(inst.bb / inst.ab)
}

/// Minimizer of `|a x - b|^2 / (x^2 + 1)`:
///
/// `(b.b - a.a + sqrt((a.a - b.b)^2 + 4 (a.b)^2)) / (2 a.b)`
///
/// computed through whichever of the two equivalent branches avoids
/// cancellation with the square root.
pub fn scalar_tls(inst: &ScalarLSInstance) -> Result<f64, LeastSquaresError> {
    if inst.ab == 0.0 {
        return Err(LeastSquaresError::DegenerateData(
            "a.b = 0 leaves no finite stationary point",
        ));
    }
    let diff = inst.bb - inst.aa;
    let root = (diff * diff + 4.0 * inst.ab * inst.ab).sqrt();
    let value = if diff >= 0.0 {
        (diff + root) / (2.0 * inst.ab)
    } else {
        2.0 * inst.ab / (root - diff)
    };
    Ok(value)
}
