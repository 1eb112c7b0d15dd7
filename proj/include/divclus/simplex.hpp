#pragma once

#include <vector>

namespace divclus {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
};

// Minimizes c.x subject to A x (<=|>=|=) b and x >= 0, via a dense
// two-phase tableau simplex with Bland's rule. Sized for the small LPs
// this project produces (a few hundred rows/columns).
//
// row_sense[i]: -1 for <=, +1 for >=, 0 for =.
LpResult simplex_solve(const std::vector<std::vector<double>>& A,
                       const std::vector<double>& b,
                       const std::vector<int>& row_sense,
                       const std::vector<double>& c,
                       double tol = 1e-9);

}  // namespace divclus
