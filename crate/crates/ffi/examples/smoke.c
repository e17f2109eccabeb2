#include <assert.h>
#include <math.h>
#include <stdio.h>
#include "bbstep.h"

int main(void) {
    const double s[2] = {1.0, 0.0};
    const double y[2] = {1.0, 1.0};
    double alpha = 0.0;
    assert(bb_bb3(s, y, 2, &alpha) == BB_CODE_OK);
    assert(fabs(alpha - 0.6180339887498949) < 1e-15);

    BbProblem *problem = bb_problem_rosenbrock();
    BbSolverOptions options = bb_solver_options_default();
    options.stop = BB_STOP_KIND_TARGET_DISTANCE;
    options.epsilon = 1e-8;
    BbRunResult *result = NULL;
    assert(bb_solve(problem, &options, &result) == BB_CODE_OK);
    BbRunStatus status;
    assert(bb_result_status(result, &status) == BB_CODE_OK);
    assert(status == BB_RUN_STATUS_CONVERGED);
    double x[2];
    assert(bb_result_final_x(result, x, 2) == BB_CODE_OK);
    printf("converged in %zu iterations at (%.9f, %.9f)\n",
           bb_result_iterations(result), x[0], x[1]);
    bb_result_free(result);
    bb_problem_free(problem);
    return 0;
}
