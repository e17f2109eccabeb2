//! C ABI over the `bbstep` crate.
//!
//! Conventions: every fallible function returns a [`BbCode`] and writes its
//! result through out-pointers; heap objects ([`BbProblem`], [`BbRunResult`])
//! are opaque handles released with their matching `*_free` function. Vector
//! arguments are raw pointer + length pairs; lengths must match the problem
//! dimension exactly.
//!
//! The header `include/bbstep.h` is generated by cbindgen at build time.
#![allow(clippy::missing_safety_doc)]

use std::ffi::c_void;
use std::panic::{catch_unwind, AssertUnwindSafe};

use bbstep::{
    bb1, bb2, bb3, bb3_from_components, run, scalar_dls, scalar_ols, scalar_tls, tls_objective,
    EngineError, LeastSquaresError, Method, Problem, RunResult, RunStatus, Safeguard,
    ScalarLSInstance, SecantPair, SolverConfig, Steplength, SteplengthError, StoppingRule,
};

/// Status code returned by every fallible function of this library.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbCode {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A length, dimension or numeric argument was out of range.
    InvalidArgument = 2,
    /// The secant pair cannot support the requested steplength formula.
    DegeneratePair = 3,
    /// The least-squares instance admits no finite solution.
    DegenerateData = 4,
    /// A scalar argument lies outside the formula's domain.
    DomainError = 5,
    /// Target-distance stopping requires a problem with a known minimizer.
    MissingMinimizer = 6,
    /// The solver configuration is inconsistent.
    InvalidConfig = 7,
    /// An evaluator panicked while the solver was running.
    EvaluatorFailure = 8,
}

impl From<SteplengthError> for BbCode {
    fn from(err: SteplengthError) -> Self {
        match err {
            SteplengthError::DegeneratePair(_) => BbCode::DegeneratePair,
            SteplengthError::DomainError(_) => BbCode::DomainError,
            SteplengthError::DimensionMismatch { .. } | SteplengthError::Empty => {
                BbCode::InvalidArgument
            }
        }
    }
}

impl From<LeastSquaresError> for BbCode {
    fn from(err: LeastSquaresError) -> Self {
        match err {
            LeastSquaresError::DegenerateData(_) => BbCode::DegenerateData,
            LeastSquaresError::DimensionMismatch { .. } | LeastSquaresError::Empty => {
                BbCode::InvalidArgument
            }
        }
    }
}

impl From<EngineError> for BbCode {
    fn from(err: EngineError) -> Self {
        match err {
            EngineError::MissingMinimizer => BbCode::MissingMinimizer,
            EngineError::InvalidConfig(_) => BbCode::InvalidConfig,
            EngineError::DegenerateStep => BbCode::DegeneratePair,
        }
    }
}

/// Steplength strategy.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbMethod {
    Bb1 = 0,
    Bb2 = 1,
    Bb3 = 2,
    /// Always apply the bootstrap steplength `alpha0`.
    Fixed = 3,
}

impl From<BbMethod> for Method {
    fn from(m: BbMethod) -> Method {
        match m {
            BbMethod::Bb1 => Method::Bb1,
            BbMethod::Bb2 => Method::Bb2,
            BbMethod::Bb3 => Method::Bb3,
            BbMethod::Fixed => Method::Fixed,
        }
    }
}

/// Stopping rule selector.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbStopKind {
    /// Stop once the distance to the known minimizer falls below `epsilon`.
    TargetDistance = 0,
    /// Stop once the gradient norm falls below `epsilon`.
    GradientNorm = 1,
}

/// Policy for unusable steplength proposals.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbSafeguard {
    /// Apply raw formula values as-is; undefined formulas end the run.
    None = 0,
    /// Reuse the previous steplength on undefined or nonpositive proposals.
    Fallback = 1,
    /// Project proposals onto `[clamp_min, clamp_max]`.
    Clamp = 2,
}

/// Terminal status of a solver run.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbRunStatus {
    Converged = 0,
    MaxIter = 1,
    Diverged = 2,
    Degenerate = 3,
}

impl From<RunStatus> for BbRunStatus {
    fn from(status: RunStatus) -> Self {
        match status {
            RunStatus::Converged => BbRunStatus::Converged,
            RunStatus::MaxIter => BbRunStatus::MaxIter,
            RunStatus::Diverged => BbRunStatus::Diverged,
            RunStatus::Degenerate => BbRunStatus::Degenerate,
        }
    }
}

/// Full solver configuration. Obtain a baseline from
/// [`bb_solver_options_default`] and override fields as needed.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BbSolverOptions {
    pub method: BbMethod,
    /// Bootstrap steplength for the first update and the safeguards'
    /// fallback value; must be positive.
    pub alpha0: f64,
    pub max_iter: usize,
    pub stop: BbStopKind,
    pub epsilon: f64,
    pub safeguard: BbSafeguard,
    /// Lower clamp bound; read only when `safeguard` is `Clamp`.
    pub clamp_min: f64,
    /// Upper clamp bound; read only when `safeguard` is `Clamp`.
    pub clamp_max: f64,
}

/// One trace entry. `alpha` is meaningful only when `has_alpha` is true
/// (the start point carries no steplength).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BbTraceRecord {
    pub k: usize,
    pub f_value: f64,
    pub grad_norm: f64,
    pub alpha: f64,
    pub has_alpha: bool,
}

/// Opaque objective/gradient handle.
pub struct BbProblem(Problem);

/// Opaque run outcome handle.
pub struct BbRunResult(RunResult);

/// Objective callback: returns `f(x)` for `x` of length `dim`.
pub type BbObjectiveFn =
    Option<unsafe extern "C" fn(x: *const f64, dim: usize, user_data: *mut c_void) -> f64>;

/// Gradient callback: writes the `dim` components of `grad f(x)` into
/// `grad_out`.
pub type BbGradientFn = Option<
    unsafe extern "C" fn(x: *const f64, dim: usize, grad_out: *mut f64, user_data: *mut c_void),
>;

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() || len == 0 {
        None
    } else {
        Some(std::slice::from_raw_parts(ptr, len))
    }
}

unsafe fn pair_from_raw(
    s: *const f64,
    y: *const f64,
    len: usize,
) -> Result<SecantPair, BbCode> {
    let s = slice_arg(s, len).ok_or(BbCode::NullPointer)?;
    let y = slice_arg(y, len).ok_or(BbCode::NullPointer)?;
    SecantPair::new(s.to_vec(), y.to_vec()).map_err(BbCode::from)
}

unsafe fn instance_from_raw(
    a: *const f64,
    b: *const f64,
    len: usize,
) -> Result<ScalarLSInstance, BbCode> {
    let a = slice_arg(a, len).ok_or(BbCode::NullPointer)?;
    let b = slice_arg(b, len).ok_or(BbCode::NullPointer)?;
    ScalarLSInstance::new(a.to_vec(), b.to_vec()).map_err(BbCode::from)
}

unsafe fn write_out(out: *mut f64, value: f64) -> BbCode {
    if out.is_null() {
        return BbCode::NullPointer;
    }
    *out = value;
    BbCode::Ok
}

fn steplength_out(
    out: *mut f64,
    value: Result<Steplength, SteplengthError>,
) -> BbCode {
    match value {
        Ok(alpha) => unsafe { write_out(out, alpha.value()) },
        Err(err) => err.into(),
    }
}

/// `s . y / y . y`, the ordinary-least-squares steplength.
#[no_mangle]
pub unsafe extern "C" fn bb_bb1(
    s: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> BbCode {
    match pair_from_raw(s, y, len) {
        Ok(pair) => steplength_out(out, bb1(&pair)),
        Err(code) => code,
    }
}

/// `s . s / s . y`, the inverse-fit steplength.
#[no_mangle]
pub unsafe extern "C" fn bb_bb2(
    s: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> BbCode {
    match pair_from_raw(s, y, len) {
        Ok(pair) => steplength_out(out, bb2(&pair)),
        Err(code) => code,
    }
}

/// The total-least-squares steplength; lies between `bb1` and `bb2`
/// whenever `s . y > 0`.
#[no_mangle]
pub unsafe extern "C" fn bb_bb3(
    s: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> BbCode {
    match pair_from_raw(s, y, len) {
        Ok(pair) => steplength_out(out, bb3(&pair)),
        Err(code) => code,
    }
}

/// Rebuilds the total-least-squares steplength from the two classical ones.
/// Both inputs must be positive.
#[no_mangle]
pub unsafe extern "C" fn bb_bb3_from_components(
    alpha_bb1: f64,
    alpha_bb2: f64,
    out: *mut f64,
) -> BbCode {
    steplength_out(
        out,
        bb3_from_components(Steplength::new(alpha_bb1), Steplength::new(alpha_bb2)),
    )
}

/// The total-least-squares misfit `|alpha y - s|^2 / (alpha^2 + 1)`.
#[no_mangle]
pub unsafe extern "C" fn bb_tls_objective(
    alpha: f64,
    s: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> BbCode {
    match pair_from_raw(s, y, len) {
        Ok(pair) => write_out(out, tls_objective(alpha, &pair)),
        Err(code) => code,
    }
}

/// Scalar ordinary least squares: minimizes `|a x - b|^2`.
#[no_mangle]
pub unsafe extern "C" fn bb_scalar_ols(
    a: *const f64,
    b: *const f64,
    len: usize,
    out: *mut f64,
) -> BbCode {
    match instance_from_raw(a, b, len).and_then(|i| scalar_ols(&i).map_err(BbCode::from)) {
        Ok(x) => write_out(out, x),
        Err(code) => code,
    }
}

/// Scalar data least squares: minimizes `|a x - b|^2 / x^2`.
#[no_mangle]
pub unsafe extern "C" fn bb_scalar_dls(
    a: *const f64,
    b: *const f64,
    len: usize,
    out: *mut f64,
) -> BbCode {
    match instance_from_raw(a, b, len).and_then(|i| scalar_dls(&i).map_err(BbCode::from)) {
        Ok(x) => write_out(out, x),
        Err(code) => code,
    }
}

/// Scalar total least squares: minimizes `|a x - b|^2 / (x^2 + 1)`.
#[no_mangle]
pub unsafe extern "C" fn bb_scalar_tls(
    a: *const f64,
    b: *const f64,
    len: usize,
    out: *mut f64,
) -> BbCode {
    match instance_from_raw(a, b, len).and_then(|i| scalar_tls(&i).map_err(BbCode::from)) {
        Ok(x) => write_out(out, x),
        Err(code) => code,
    }
}

/// The planar Rosenbrock problem with its canonical start `(-1.2, 1)` and
/// minimizer `(1, 1)`. Release with [`bb_problem_free`].
#[no_mangle]
pub extern "C" fn bb_problem_rosenbrock() -> *mut BbProblem {
    Box::into_raw(Box::new(BbProblem(bbstep::rosenbrock())))
}

/// Diagonal SPD quadratic `0.5 x' diag(d) x - b' x` with start point all
/// ones. Returns null when `dim` is zero, a pointer is null, or a diagonal
/// entry is not positive. Release with [`bb_problem_free`].
#[no_mangle]
pub unsafe extern "C" fn bb_problem_quadratic(
    diag: *const f64,
    shift: *const f64,
    dim: usize,
) -> *mut BbProblem {
    let (Some(diag), Some(shift)) = (slice_arg(diag, dim), slice_arg(shift, dim)) else {
        return std::ptr::null_mut();
    };
    match bbstep::quadratic(&bbstep::QuadraticSpec {
        diag: diag.to_vec(),
        shift: shift.to_vec(),
    }) {
        Ok(problem) => Box::into_raw(Box::new(BbProblem(problem))),
        Err(_) => std::ptr::null_mut(),
    }
}

struct UserData(*mut c_void);
// Callers guarantee their callbacks and context are safe to invoke from the
// thread running the solver.
unsafe impl Send for UserData {}
unsafe impl Sync for UserData {}

impl UserData {
    fn get(&self) -> *mut c_void {
        self.0
    }
}

/// Wraps caller-supplied objective and gradient callbacks as a problem.
///
/// `start` must point to `dim` values; `minimizer` may be null when the
/// optimum is unknown (target-distance stopping is then unavailable).
/// The callbacks must stay valid until [`bb_problem_free`] and must be safe
/// to call from the solving thread. Returns null on invalid arguments.
#[no_mangle]
pub unsafe extern "C" fn bb_problem_custom(
    name: *const std::os::raw::c_char,
    dim: usize,
    f: BbObjectiveFn,
    grad: BbGradientFn,
    user_data: *mut c_void,
    start: *const f64,
    minimizer: *const f64,
) -> *mut BbProblem {
    let (Some(f), Some(grad), Some(start)) = (f, grad, slice_arg(start, dim)) else {
        return std::ptr::null_mut();
    };
    let name = if name.is_null() {
        "custom".to_string()
    } else {
        match std::ffi::CStr::from_ptr(name).to_str() {
            Ok(s) => s.to_string(),
            Err(_) => return std::ptr::null_mut(),
        }
    };
    let f_data = UserData(user_data);
    let g_data = UserData(user_data);
    let mut problem = Problem::new(
        name,
        dim,
        move |x| unsafe { f(x.as_ptr(), x.len(), f_data.get()) },
        move |x| {
            let mut g = vec![0.0; x.len()];
            unsafe { grad(x.as_ptr(), x.len(), g.as_mut_ptr(), g_data.get()) };
            g
        },
        start.to_vec(),
    );
    if !minimizer.is_null() {
        problem = problem.with_minimizer(std::slice::from_raw_parts(minimizer, dim).to_vec());
    }
    Box::into_raw(Box::new(BbProblem(problem)))
}

/// Dimension of the problem; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bb_problem_dim(problem: *const BbProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.0.dim())
}

/// Releases a problem handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bb_problem_free(problem: *mut BbProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Baseline options: bb3, bootstrap 1e-3, 5000 iterations, gradient-norm
/// stopping at 1e-8, no safeguard.
#[no_mangle]
pub extern "C" fn bb_solver_options_default() -> BbSolverOptions {
    BbSolverOptions {
        method: BbMethod::Bb3,
        alpha0: 1e-3,
        max_iter: 5000,
        stop: BbStopKind::GradientNorm,
        epsilon: 1e-8,
        safeguard: BbSafeguard::None,
        clamp_min: 0.0,
        clamp_max: 0.0,
    }
}

fn solver_config(options: &BbSolverOptions) -> SolverConfig {
    SolverConfig {
        method: options.method.into(),
        alpha0: options.alpha0,
        max_iter: options.max_iter,
        stopping: match options.stop {
            BbStopKind::TargetDistance => StoppingRule::TargetDistance {
                epsilon: options.epsilon,
            },
            BbStopKind::GradientNorm => StoppingRule::GradientNorm {
                epsilon: options.epsilon,
            },
        },
        safeguard: match options.safeguard {
            BbSafeguard::None => Safeguard::None,
            BbSafeguard::Fallback => Safeguard::FallbackOnDegenerate,
            BbSafeguard::Clamp => Safeguard::Clamp {
                min: options.clamp_min,
                max: options.clamp_max,
            },
        },
    }
}

/// Runs gradient descent on the problem from its start point. On success
/// writes a result handle into `out`; release it with [`bb_result_free`].
#[no_mangle]
pub unsafe extern "C" fn bb_solve(
    problem: *const BbProblem,
    options: *const BbSolverOptions,
    out: *mut *mut BbRunResult,
) -> BbCode {
    let (Some(problem), Some(options)) = (problem.as_ref(), options.as_ref()) else {
        return BbCode::NullPointer;
    };
    if out.is_null() {
        return BbCode::NullPointer;
    }
    let config = solver_config(options);
    match catch_unwind(AssertUnwindSafe(|| run(&problem.0, &config))) {
        Ok(Ok(result)) => {
            *out = Box::into_raw(Box::new(BbRunResult(result)));
            BbCode::Ok
        }
        Ok(Err(err)) => err.into(),
        Err(_) => BbCode::EvaluatorFailure,
    }
}

/// Terminal status of the run.
#[no_mangle]
pub unsafe extern "C" fn bb_result_status(
    result: *const BbRunResult,
    out: *mut BbRunStatus,
) -> BbCode {
    let Some(result) = result.as_ref() else {
        return BbCode::NullPointer;
    };
    if out.is_null() {
        return BbCode::NullPointer;
    }
    *out = result.0.status.into();
    BbCode::Ok
}

/// Number of x-updates performed; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bb_result_iterations(result: *const BbRunResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.iterations)
}

/// Number of trace records (iterations + 1); 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bb_result_trace_len(result: *const BbRunResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.trace.len())
}

/// Copies the final iterate into `out`, which must hold exactly `len ==
/// dim` values.
#[no_mangle]
pub unsafe extern "C" fn bb_result_final_x(
    result: *const BbRunResult,
    out: *mut f64,
    len: usize,
) -> BbCode {
    let Some(result) = result.as_ref() else {
        return BbCode::NullPointer;
    };
    if out.is_null() {
        return BbCode::NullPointer;
    }
    if len != result.0.final_x.len() {
        return BbCode::InvalidArgument;
    }
    std::ptr::copy_nonoverlapping(result.0.final_x.as_ptr(), out, len);
    BbCode::Ok
}

/// Copies the scalar fields of trace record `index` into `out`.
#[no_mangle]
pub unsafe extern "C" fn bb_result_record(
    result: *const BbRunResult,
    index: usize,
    out: *mut BbTraceRecord,
) -> BbCode {
    let Some(result) = result.as_ref() else {
        return BbCode::NullPointer;
    };
    if out.is_null() {
        return BbCode::NullPointer;
    }
    let Some(record) = result.0.trace.get(index) else {
        return BbCode::InvalidArgument;
    };
    *out = BbTraceRecord {
        k: record.k,
        f_value: record.f_value,
        grad_norm: record.grad_norm,
        alpha: record.alpha.unwrap_or(0.0),
        has_alpha: record.alpha.is_some(),
    };
    BbCode::Ok
}

/// Copies the iterate of trace record `index` into `out`, which must hold
/// exactly `len == dim` values.
#[no_mangle]
pub unsafe extern "C" fn bb_result_record_x(
    result: *const BbRunResult,
    index: usize,
    out: *mut f64,
    len: usize,
) -> BbCode {
    let Some(result) = result.as_ref() else {
        return BbCode::NullPointer;
    };
    if out.is_null() {
        return BbCode::NullPointer;
    }
    let Some(record) = result.0.trace.get(index) else {
        return BbCode::InvalidArgument;
    };
    if len != record.x.len() {
        return BbCode::InvalidArgument;
    }
    std::ptr::copy_nonoverlapping(record.x.as_ptr(), out, len);
    BbCode::Ok
}

/// Releases a result handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bb_result_free(result: *mut BbRunResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
