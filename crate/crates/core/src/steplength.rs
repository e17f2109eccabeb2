//! Closed-form Barzilai-Borwein steplengths.
//!
//! All three formulas consume a [`SecantPair`] built from two consecutive
//! iterates and gradients. `bb1` and `bb2` are the classical pair; `bb3`
//! solves the same secant fit in the total-least-squares sense and always
//! lands between them when the pair has positive curvature (`sy > 0`).

use thiserror::Error;

use crate::vecops::dot;

/// Errors raised by the steplength formulas and their inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SteplengthError {
    /// The secant pair cannot support the requested formula (zero vector
    /// or orthogonal displacement/gradient-change).
    #[error("degenerate secant pair: {0}")]
    DegeneratePair(&'static str),
    /// A scalar argument lies outside the formula's domain.
    #[error("domain error: {0}")]
    DomainError(&'static str),
    /// Vectors of mismatched length.
    #[error("dimension mismatch: s has length {s_len}, y has length {y_len}")]
    DimensionMismatch { s_len: usize, y_len: usize },
    /// Empty vectors carry no secant information.
    #[error("secant vectors must have dimension >= 1")]
    Empty,
}

/// A scalar steplength, the multiplier applied to the gradient.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Steplength(f64);

impl Steplength {
    pub fn new(value: f64) -> Self {
        Steplength(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Steplength> for f64 {
    fn from(alpha: Steplength) -> f64 {
        alpha.0
    }
}

/// Displacement `s = x_next - x_prev` and gradient change `y = g_next - g_prev`
/// with their dot products cached at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SecantPair {
    s: Vec<f64>,
    y: Vec<f64>,
    ss: f64,
    yy: f64,
    sy: f64,
}

impl SecantPair {
    /// Builds a pair from a displacement and a gradient change of equal,
    /// nonzero dimension. The dot products `ss`, `yy`, `sy` are computed
    /// once here and reused by every formula.
    pub fn new(s: Vec<f64>, y: Vec<f64>) -> Result<Self, SteplengthError> {
        if s.is_empty() || y.is_empty() {
            return Err(SteplengthError::Empty);
        }
        if s.len() != y.len() {
            return Err(SteplengthError::DimensionMismatch {
                s_len: s.len(),
                y_len: y.len(),
            });
        }
        let ss = dot(&s, &s);
        let yy = dot(&y, &y);
        let sy = dot(&s, &y);
        Ok(SecantPair { s, y, ss, yy, sy })
    }

    /// Builds the pair between two consecutive iterate/gradient snapshots.
    pub fn between(
        x_prev: &[f64],
        g_prev: &[f64],
        x_next: &[f64],
        g_next: &[f64],
    ) -> Result<Self, SteplengthError> {
        let s = crate::vecops::sub(x_next, x_prev);
        let y = crate::vecops::sub(g_next, g_prev);
        SecantPair::new(s, y)
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// `s . s`
    pub fn ss(&self) -> f64 {
        self.ss
    }

    /// `y . y`
    pub fn yy(&self) -> f64 {
        self.yy
    }

    /// `s . y`
    pub fn sy(&self) -> f64 {
        self.sy
    }
}

/// Steplength fitting `s ~ alpha * y` by ordinary least squares:
/// `sy / yy`.
pub fn bb1(pair: &SecantPair) -> Result<Steplength, SteplengthError> {
    if pair.yy == 0.0 {
        return Err(SteplengthError::DegeneratePair("y is the zero vector"));
    }
    if pair.sy == 0.0 {
        return Err(SteplengthError::DegeneratePair("s and y are orthogonal"));
    }
    Ok(Steplength(pair.sy / pair.yy))
}

/// Steplength fitting `beta * s ~ y` by ordinary least squares and
/// inverting the result: `ss / sy`.
pub fn bb2(pair: &SecantPair) -> Result<Steplength, SteplengthError> {
    if pair.ss == 0.0 {
        return Err(SteplengthError::DegeneratePair("s is the zero vector"));
    }
    if pair.sy == 0.0 {
        return Err(SteplengthError::DegeneratePair("s and y are orthogonal"));
    }
    Ok(Steplength(pair.ss / pair.sy))
}

/// Steplength fitting `s ~ alpha * y` by total least squares, the unique
/// positive minimizer of [`tls_objective`] when `sy > 0`:
///
/// `(ss - yy + sqrt((yy - ss)^2 + 4 sy^2)) / (2 sy)`
///
/// The two algebraically equivalent branches below avoid cancellation
/// between `ss - yy` and the square root.
pub fn bb3(pair: &SecantPair) -> Result<Steplength, SteplengthError> {
    if pair.sy == 0.0 {
        return Err(SteplengthError::DegeneratePair(
            "s and y are orthogonal; the total-least-squares fit degenerates",
        ));
    }
    let diff = pair.ss - pair.yy;
    let root = (diff * diff + 4.0 * pair.sy * pair.sy).sqrt();
    let value = if diff >= 0.0 {
        (diff + root) / (2.0 * pair.sy)
    } else {
        2.0 * pair.sy / (root - diff)
    };
    Ok(Steplength(value))
}

/// Reconstructs the total-least-squares steplength from the two classical
/// ones alone:
///
/// `(a2 - 1/a1 + sqrt((1/a1 - a2)^2 + 4)) / 2`
///
/// Pure function of its two scalars; inputs that do not come from a single
/// secant pair still produce a well-defined number, just without the
/// `a1 <= result <= a2` guarantee.
pub fn bb3_from_components(
    alpha_bb1: Steplength,
    alpha_bb2: Steplength,
) -> Result<Steplength, SteplengthError> {
    let a1 = alpha_bb1.value();
    let a2 = alpha_bb2.value();
    if a1 <= 0.0 || a2 <= 0.0 {
        return Err(SteplengthError::DomainError(
            "both component steplengths must be positive",
        ));
    }
    let diff = a2 - 1.0 / a1;
    let root = (diff * diff + 4.0).sqrt();
    let value = if diff >= 0.0 {
        (diff + root) / 2.0
    } else {
        2.0 / (root - diff)
    };
    Ok(Steplength(value))
}

/// The total-least-squares secant misfit
/// `q(alpha) = |alpha * y - s|^2 / (alpha^2 + 1)`,
/// expanded to `(alpha^2 yy - 2 alpha sy + ss) / (alpha^2 + 1)`.
///
/// Defined for every real `alpha`; nonnegative.
pub fn tls_objective(alpha: f64, pair: &SecantPair) -> f64 {
    (alpha * alpha * pair.yy - 2.0 * alpha * pair.sy + pair.ss) / (alpha * alpha + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(s: &[f64], y: &[f64]) -> SecantPair {
        SecantPair::new(s.to_vec(), y.to_vec()).unwrap()
    }

    fn golden() -> f64 {
        (5f64.sqrt() - 1.0) / 2.0
    }

    #[test]
    fn bb1_identity_scaling_and_mixed() {
        assert_eq!(bb1(&pair(&[1.0, 1.0], &[1.0, 1.0])).unwrap().value(), 1.0);
        assert_eq!(bb1(&pair(&[2.0, 0.0], &[1.0, 0.0])).unwrap().value(), 2.0);
        // sy = 1, yy = 2
        assert_eq!(bb1(&pair(&[1.0, 0.0], &[1.0, 1.0])).unwrap().value(), 0.5);
    }

    #[test]
    fn bb2_identity_scaling_and_mixed() {
        assert_eq!(bb2(&pair(&[1.0, 1.0], &[1.0, 1.0])).unwrap().value(), 1.0);
        assert_eq!(bb2(&pair(&[2.0, 0.0], &[1.0, 0.0])).unwrap().value(), 2.0);
        // ss = 1, sy = 1
        assert_eq!(bb2(&pair(&[1.0, 0.0], &[1.0, 1.0])).unwrap().value(), 1.0);
    }

    #[test]
    fn bb3_identity_scaling_and_golden() {
        assert_eq!(bb3(&pair(&[1.0, 1.0], &[1.0, 1.0])).unwrap().value(), 1.0);
        assert_eq!(bb3(&pair(&[3.0, 0.0], &[1.0, 0.0])).unwrap().value(), 3.0);
        let v = bb3(&pair(&[1.0, 0.0], &[1.0, 1.0])).unwrap().value();
        assert!((v - golden()).abs() < 1e-15, "got {v}");
    }

    #[test]
    fn bb3_from_components_matches() {
        let one = Steplength::new(1.0);
        assert_eq!(bb3_from_components(one, one).unwrap().value(), 1.0);
        let v = bb3_from_components(Steplength::new(0.5), Steplength::new(1.0))
            .unwrap()
            .value();
        assert!((v - golden()).abs() < 1e-15, "got {v}");
        let c = Steplength::new(7.0);
        let v = bb3_from_components(c, c).unwrap().value();
        assert!((v - 7.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn bb3_from_components_rejects_nonpositive() {
        let bad = Steplength::new(0.0);
        let ok = Steplength::new(1.0);
        assert!(matches!(
            bb3_from_components(bad, ok),
            Err(SteplengthError::DomainError(_))
        ));
        assert!(matches!(
            bb3_from_components(ok, Steplength::new(-2.0)),
            Err(SteplengthError::DomainError(_))
        ));
    }

    #[test]
    fn degenerate_pairs_are_rejected() {
        let orthogonal = pair(&[1.0, 0.0], &[0.0, 1.0]);
        assert!(matches!(
            bb1(&orthogonal),
            Err(SteplengthError::DegeneratePair(_))
        ));
        assert!(matches!(
            bb2(&orthogonal),
            Err(SteplengthError::DegeneratePair(_))
        ));
        assert!(matches!(
            bb3(&orthogonal),
            Err(SteplengthError::DegeneratePair(_))
        ));
        let zero_y = pair(&[1.0, 1.0], &[0.0, 0.0]);
        assert!(bb1(&zero_y).is_err());
        let zero_s = pair(&[0.0, 0.0], &[1.0, 1.0]);
        assert!(bb2(&zero_s).is_err());
    }

    #[test]
    fn pair_construction_validates_dimensions() {
        assert!(matches!(
            SecantPair::new(vec![], vec![]),
            Err(SteplengthError::Empty)
        ));
        assert!(matches!(
            SecantPair::new(vec![1.0], vec![1.0, 2.0]),
            Err(SteplengthError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tls_objective_examples() {
        let p = pair(&[1.0, 0.0], &[1.0, 1.0]);
        assert_eq!(tls_objective(0.0, &p), p.ss());
        let q = pair(&[1.0, 1.0], &[1.0, 1.0]);
        assert_eq!(tls_objective(1.0, &q), 0.0);
        // local minimality of the closed form on a +-0.01 stencil
        let alpha = bb3(&p).unwrap().value();
        let at = tls_objective(alpha, &p);
        assert!(at <= tls_objective(alpha + 0.01, &p));
        assert!(at <= tls_objective(alpha - 0.01, &p));
    }

    fn secant_pair_strategy(
        components: std::ops::Range<f64>,
    ) -> impl Strategy<Value = SecantPair> {
        (1usize..=10)
            .prop_flat_map(move |dim| {
                (
                    prop::collection::vec(components.clone(), dim),
                    prop::collection::vec(components.clone(), dim),
                )
            })
            .prop_filter_map("pair must have sy != 0", |(s, y)| {
                let p = SecantPair::new(s, y).unwrap();
                (p.sy() != 0.0).then_some(p)
            })
    }

    /// Flips `y` so the pair has positive curvature.
    fn with_positive_sy(p: SecantPair) -> SecantPair {
        if p.sy() > 0.0 {
            p
        } else {
            let flipped: Vec<f64> = p.y().iter().map(|v| -v).collect();
            SecantPair::new(p.s().to_vec(), flipped).unwrap()
        }
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * f64::max(1.0, f64::max(a.abs(), b.abs()))
    }

    proptest! {
        #[test]
        fn cauchy_schwarz_holds(p in secant_pair_strategy(-10.0..10.0)) {
            let bound = (p.ss() * p.yy()).sqrt();
            prop_assert!(p.sy().abs() <= bound * (1.0 + 1e-12));
        }

        #[test]
        fn sandwich_ordering(p in secant_pair_strategy(-10.0..10.0)) {
            let p = with_positive_sy(p);
            let a1 = bb1(&p).unwrap().value();
            let a2 = bb2(&p).unwrap().value();
            let a3 = bb3(&p).unwrap().value();
            let slack = 1e-12 * f64::max(1.0, a2.abs());
            prop_assert!(a1 <= a2 + slack, "bb1={a1} bb2={a2}");
            prop_assert!(a1 <= a3 + slack && a3 <= a2 + slack, "bb1={a1} bb3={a3} bb2={a2}");
        }

        #[test]
        fn reformulation_identity(p in secant_pair_strategy(-10.0..10.0)) {
            let p = with_positive_sy(p);
            let direct = bb3(&p).unwrap().value();
            let recombined = bb3_from_components(bb1(&p).unwrap(), bb2(&p).unwrap())
                .unwrap()
                .value();
            prop_assert!(rel_close(direct, recombined, 1e-12),
                "direct={direct} recombined={recombined}");
        }

        #[test]
        fn signs_follow_curvature(p in secant_pair_strategy(-10.0..10.0)) {
            let a3 = bb3(&p).unwrap().value();
            prop_assert_eq!(a3 > 0.0, p.sy() > 0.0);
            if p.sy() > 0.0 {
                prop_assert!(bb1(&p).unwrap().value() > 0.0);
                prop_assert!(bb2(&p).unwrap().value() > 0.0);
            } else {
                prop_assert!(bb1(&p).unwrap().value() < 0.0);
            }
        }

        #[test]
        fn tls_objective_nonnegative(
            p in secant_pair_strategy(-10.0..10.0),
            alpha in -100.0..100.0f64,
        ) {
            prop_assert!(tls_objective(alpha, &p) >= -1e-12);
        }

        #[test]
        fn bb3_minimizes_tls_objective(p in secant_pair_strategy(-10.0..10.0)) {
            let p = with_positive_sy(p);
            let alpha = bb3(&p).unwrap().value();
            let at = tls_objective(alpha, &p);
            let h = 1e-3 * f64::max(1.0, alpha.abs());
            prop_assert!(at <= tls_objective(alpha + h, &p) + 1e-12);
            prop_assert!(at <= tls_objective(alpha - h, &p) + 1e-12);
        }
    }

    #[test]
    fn formulas_invariant_under_rotation() {
        // Givens rotations applied to both vectors preserve all three dot
        // products, so the steplengths must not move.
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let dim = 2 + (next() * 7.0) as usize;
            let mut s: Vec<f64> = (0..dim).map(|_| next() * 4.0 - 2.0).collect();
            let mut y: Vec<f64> = (0..dim).map(|_| next() * 4.0 - 2.0).collect();
            let before = pair(&s, &y);
            if before.sy() <= 0.0 {
                y.iter_mut().for_each(|v| *v = -*v);
            }
            let before = pair(&s, &y);
            let (a1, a2, a3) = (
                bb1(&before).unwrap().value(),
                bb2(&before).unwrap().value(),
                bb3(&before).unwrap().value(),
            );
            for _ in 0..20 {
                let i = (next() * dim as f64) as usize % dim;
                let mut j = (next() * dim as f64) as usize % dim;
                if i == j {
                    j = (j + 1) % dim;
                }
                let theta = next() * std::f64::consts::TAU;
                let (c, n) = (theta.cos(), theta.sin());
                for v in [&mut s, &mut y] {
                    let (vi, vj) = (v[i], v[j]);
                    v[i] = c * vi - n * vj;
                    v[j] = n * vi + c * vj;
                }
            }
            let after = pair(&s, &y);
            let tol = 1e-10;
            assert!(rel_close(bb1(&after).unwrap().value(), a1, tol));
            assert!(rel_close(bb2(&after).unwrap().value(), a2, tol));
            assert!(rel_close(bb3(&after).unwrap().value(), a3, tol));
        }
    }

    #[test]
    fn limits_along_scaling_path() {
        // s = t*u with unit u, y: large t drives bb3 to bb2, small t to bb1.
        let u = [0.6, 0.8];
        let y = [0.8, 0.6];
        for (t, to_bb2) in [(1e6, true), (1e-6, false)] {
            let s: Vec<f64> = u.iter().map(|v| v * t).collect();
            let p = pair(&s, &y);
            let a3 = bb3(&p).unwrap().value();
            let target = if to_bb2 {
                bb2(&p).unwrap().value()
            } else {
                bb1(&p).unwrap().value()
            };
            assert!((a3 / target - 1.0).abs() <= 1e-5, "t={t} ratio={}", a3 / target);
        }
    }
}
