#pragma once

#include "fracmatch/rational.hpp"

namespace fracmatch {

// Exact-rational primal simplex for min c'x s.t. Ax = b, x >= 0.
// Bland's rule throughout, so cycling is impossible; no scaling, no
// tolerances. On infeasibility the Farkas witness y (y'A <= 0, y'b > 0)
// is extracted from the phase-1 reduced costs of the artificial columns.

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  RatioVector x;       // primal solution (Optimal)
  Ratio objective;     // c'x at the optimum
  RatioVector farkas;  // y with y'A <= 0 and y'b > 0 (Infeasible)
};

LpResult solve_lp(const RatioMatrix& A, const RatioVector& b, const RatioVector& c);

}  // namespace fracmatch
