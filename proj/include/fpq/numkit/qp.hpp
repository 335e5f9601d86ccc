#pragma once

#include "fpq/numkit/matrix.hpp"

namespace fpq::numkit {

/// minimize 1/2 z^T H z + c^T z subject to A z <= b, with H symmetric PSD.
struct QpProblem {
    Matrix quadratic;
    Vector linear;
    Matrix constraints;
    Vector bounds;
};

struct QpOptions {
    double feasibility_tol = 1e-9;
    double kkt_tol = 1e-6;
    int max_iterations = 100000;
};

struct QpResult {
    Vector z;
    Vector multipliers;       // one per constraint row, >= 0
    double objective = 0.0;
    double kkt_residual = 0.0;   // max of stationarity and complementarity residuals
    double max_violation = 0.0;  // max(A z - b)
    int iterations = 0;
    bool polished = false;
};

/// Operator-splitting (ADMM) QP solver with an active-set polishing step.
///
/// ADMM identifies the active set; polishing then solves the equality
/// constrained KKT system on that set with iterative refinement, which brings
/// feasibility and stationarity down to round-off. The ADMM iterate is
/// returned unpolished only if it already meets both tolerances.
QpResult solve_qp(const QpProblem& p, const QpOptions& opt = {});

}  // namespace fpq::numkit
