#pragma once

#include <string_view>

#include "fpq/numkit/matrix.hpp"

namespace fpq::numkit {

/// minimize c^T z subject to A z <= b, z unrestricted in sign.
struct LpProblem {
    Vector objective;
    Matrix constraints;
    Vector bounds;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus s);

struct LpOptions {
    double feasibility_tol = 1e-9;
    // Reduced costs above -optimality_tol/100 count as nonnegative.
    double optimality_tol = 1e-8;
    // 0 selects a cap proportional to the problem size.
    int max_iterations = 0;
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Vector z;                 // empty unless Optimal
    double objective = 0.0;   // c^T z when Optimal
    double max_violation = 0.0;  // max(A z - b), <= 0 means strictly feasible
    int iterations = 0;
};

/// Dense two-phase tableau simplex with Bland's rule.
///
/// Free variables are split as z = z+ - z-. Phase 1 drives artificials
/// (one per row with negative bound) to zero; artificials left basic at zero
/// are pivoted out or their rows dropped as redundant. The final basic
/// solution is recomputed from the optimal basis by an LU solve to shed
/// tableau round-off. Throws SolverStall past the iteration cap.
LpResult solve_lp(const LpProblem& p, const LpOptions& opt = {});

}  // namespace fpq::numkit
