/* C interface to the bbstep steplength and gradient-descent library. */

#ifndef BBSTEP_H
#define BBSTEP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function of this library.
enum BbCode
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  BB_CODE_OK = 0,
  // A required pointer argument was null.
  BB_CODE_NULL_POINTER = 1,
  // A length, dimension or numeric argument was out of range.
  BB_CODE_INVALID_ARGUMENT = 2,
  // The secant pair cannot support the requested steplength formula.
  BB_CODE_DEGENERATE_PAIR = 3,
  // The least-squares instance admits no finite solution.
  BB_CODE_DEGENERATE_DATA = 4,
  // A scalar argument lies outside the formula's domain.
  BB_CODE_DOMAIN_ERROR = 5,
  // Target-distance stopping requires a problem with a known minimizer.
  BB_CODE_MISSING_MINIMIZER = 6,
  // The solver configuration is inconsistent.
  BB_CODE_INVALID_CONFIG = 7,
  // An evaluator panicked while the solver was running.
  BB_CODE_EVALUATOR_FAILURE = 8,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum BbCode BbCode;
#else
typedef int32_t BbCode;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Steplength strategy.
enum BbMethod
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  BB_METHOD_BB1 = 0,
  BB_METHOD_BB2 = 1,
  BB_METHOD_BB3 = 2,
  // Always apply the bootstrap steplength `alpha0`.
  BB_METHOD_FIXED = 3,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum BbMethod BbMethod;
#else
typedef int32_t BbMethod;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Stopping rule selector.
enum BbStopKind
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  // Stop once the distance to the known minimizer falls below `epsilon`.
  BB_STOP_KIND_TARGET_DISTANCE = 0,
  // Stop once the gradient norm falls below `epsilon`.
  BB_STOP_KIND_GRADIENT_NORM = 1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum BbStopKind BbStopKind;
#else
typedef int32_t BbStopKind;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Policy for unusable steplength proposals.
enum BbSafeguard
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  // Apply raw formula values as-is; undefined formulas end the run.
  BB_SAFEGUARD_NONE = 0,
  // Reuse the previous steplength on undefined or nonpositive proposals.
  BB_SAFEGUARD_FALLBACK = 1,
  // Project proposals onto `[clamp_min, clamp_max]`.
  BB_SAFEGUARD_CLAMP = 2,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum BbSafeguard BbSafeguard;
#else
typedef int32_t BbSafeguard;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Terminal status of a solver run.
enum BbRunStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  BB_RUN_STATUS_CONVERGED = 0,
  BB_RUN_STATUS_MAX_ITER = 1,
  BB_RUN_STATUS_DIVERGED = 2,
  BB_RUN_STATUS_DEGENERATE = 3,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum BbRunStatus BbRunStatus;
#else
typedef int32_t BbRunStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Opaque objective/gradient handle.
typedef struct BbProblem BbProblem;

// Opaque run outcome handle.
typedef struct BbRunResult BbRunResult;

// Objective callback: returns `f(x)` for `x` of length `dim`.
typedef double (*BbObjectiveFn)(const double *x, size_t dim, void *user_data);

// Gradient callback: writes the `dim` components of `grad f(x)` into
// `grad_out`.
typedef void (*BbGradientFn)(const double *x, size_t dim, double *grad_out, void *user_data);

// Full solver configuration. Obtain a baseline from
// [`bb_solver_options_default`] and override fields as needed.
typedef struct BbSolverOptions {
  BbMethod method;
  // Bootstrap steplength for the first update and the safeguards'
  // fallback value; must be positive.
  double alpha0;
  size_t max_iter;
  BbStopKind stop;
  double epsilon;
  BbSafeguard safeguard;
  // Lower clamp bound; read only when `safeguard` is `Clamp`.
  double clamp_min;
  // Upper clamp bound; read only when `safeguard` is `Clamp`.
  double clamp_max;
} BbSolverOptions;

// One trace entry. `alpha` is meaningful only when `has_alpha` is true
// (the start point carries no steplength).
typedef struct BbTraceRecord {
  size_t k;
  double f_value;
  double grad_norm;
  double alpha;
  bool has_alpha;
} BbTraceRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// `s . y / y . y`, the ordinary-least-squares steplength.
BbCode bb_bb1(const double *s, const double *y, size_t len, double *out);

// `s . s / s . y`, the inverse-fit steplength.
BbCode bb_bb2(const double *s, const double *y, size_t len, double *out);

// The total-least-squares steplength; lies between `bb1` and `bb2`
// whenever `s . y > 0`.
BbCode bb_bb3(const double *s, const double *y, size_t len, double *out);

// Rebuilds the total-least-squares steplength from the two classical ones.
// Both inputs must be positive.
BbCode bb_bb3_from_components(double alpha_bb1, double alpha_bb2, double *out);

// The total-least-squares misfit `|alpha y - s|^2 / (alpha^2 + 1)`.
BbCode bb_tls_objective(double alpha, const double *s, const double *y, size_t len, double *out);

// Scalar ordinary least squares: minimizes `|a x - b|^2`.
BbCode bb_scalar_ols(const double *a, const double *b, size_t len, double *out);

// Scalar data least squares: minimizes `|a x - b|^2 / x^2`.
BbCode bb_scalar_dls(const double *a, const double *b, size_t len, double *out);

// Scalar total least squares: minimizes `|a x - b|^2 / (x^2 + 1)`.
BbCode bb_scalar_tls(const double *a, const double *b, size_t len, double *out);

// The planar Rosenbrock problem with its canonical start `(-1.2, 1)` and
// minimizer `(1, 1)`. Release with [`bb_problem_free`].
struct BbProblem *bb_problem_rosenbrock(void);

// Diagonal SPD quadratic `0.5 x' diag(d) x - b' x` with start point all
// ones. Returns null when `dim` is zero, a pointer is null, or a diagonal
// entry is not positive. Release with [`bb_problem_free`].
struct BbProblem *bb_problem_quadratic(const double *diag, const double *shift, size_t dim);

// Wraps caller-supplied objective and gradient callbacks as a problem.
//
// `start` must point to `dim` values; `minimizer` may be null when the
// optimum is unknown (target-distance stopping is then unavailable).
// The callbacks must stay valid until [`bb_problem_free`] and must be safe
// to call from the solving thread. Returns null on invalid arguments.
struct BbProblem *bb_problem_custom(const char *name,
                                    size_t dim,
                                    BbObjectiveFn f,
                                    BbGradientFn grad,
                                    void *user_data,
                                    const double *start,
                                    const double *minimizer);

// Dimension of the problem; 0 for a null handle.
size_t bb_problem_dim(const struct BbProblem *problem);

// Releases a problem handle. Null is ignored.
void bb_problem_free(struct BbProblem *problem);

// Baseline options: bb3, bootstrap 1e-3, 5000 iterations, gradient-norm
// stopping at 1e-8, no safeguard.
struct BbSolverOptions bb_solver_options_default(void);

// Runs gradient descent on the problem from its start point. On success
// writes a result handle into `out`; release it with [`bb_result_free`].
BbCode bb_solve(const struct BbProblem *problem,
                const struct BbSolverOptions *options,
                struct BbRunResult **out);

// Terminal status of the run.
BbCode bb_result_status(const struct BbRunResult *result, BbRunStatus *out);

// Number of x-updates performed; 0 for a null handle.
size_t bb_result_iterations(const struct BbRunResult *result);

// Number of trace records (iterations + 1); 0 for a null handle.
size_t bb_result_trace_len(const struct BbRunResult *result);

// Copies the final iterate into `out`, which must hold exactly `len ==
// dim` values.
BbCode bb_result_final_x(const struct BbRunResult *result, double *out, size_t len);

// Copies the scalar fields of trace record `index` into `out`.
BbCode bb_result_record(const struct BbRunResult *result, size_t index, struct BbTraceRecord *out);

// Copies the iterate of trace record `index` into `out`, which must hold
// exactly `len == dim` values.
BbCode bb_result_record_x(const struct BbRunResult *result, size_t index, double *out, size_t len);

// Releases a result handle. Null is ignored.
void bb_result_free(struct BbRunResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BBSTEP_H */
