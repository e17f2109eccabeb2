//! Barzilai-Borwein steplengths for gradient descent.
//!
//! The crate provides the two classical BB steplengths (`bb1`, `bb2`), a
//! third one derived from total least squares (`bb3`) together with the
//! scalar least-squares triad behind all three, a plain gradient-descent
//! engine with pluggable steplength strategies, built-in test problems,
//! search-based verification oracles, and the `bbbench` benchmark CLI.
//!
//! ```
//! use bbstep::{rosenbrock, run, Method, RunStatus, Safeguard, SolverConfig, StoppingRule};
//!
//! let problem = rosenbrock();
//! let config = SolverConfig {
//!     method: Method::Bb3,
//!     alpha0: 1e-3,
//!     max_iter: 5000,
//!     stopping: StoppingRule::TargetDistance { epsilon: 1e-8 },
//!     safeguard: Safeguard::None,
//! };
//! let result = run(&problem, &config).unwrap();
//! assert_eq!(result.status, RunStatus::Converged);
//! ```

// validation uses `!(x > 0.0)` so NaN is rejected along with the sign
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod engine;
pub mod least_squares;
pub mod oracles;
pub mod problems;
pub mod steplength;
mod vecops;

pub use engine::{
    check_stop, first_step, propose_steplength, run, EngineError, IterationRecord, Method,
    Problem, RunResult, RunStatus, Safeguard, SolverConfig, StoppingRule,
};
pub use least_squares::{scalar_dls, scalar_ols, scalar_tls, LeastSquaresError, ScalarLSInstance};
pub use oracles::{minimize_scalar, verify_bb3, Bb3Report, OracleError};
pub use problems::{finite_diff_grad, quadratic, rosenbrock, ProblemError, QuadraticSpec};
pub use steplength::{
    bb1, bb2, bb3, bb3_from_components, tls_objective, SecantPair, Steplength, SteplengthError,
};
