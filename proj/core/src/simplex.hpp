#pragma once

#include <vector>

#include "nostcap/table.hpp"

namespace nostcap::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

// Minimizes c.x subject to A x = b, x >= 0, by a dense two-phase tableau
// simplex. Deterministic pivoting: Dantzig rule with ties broken by lowest
// index, switching to Bland's rule after a stall to guarantee termination.
// eps is the pivot/feasibility tolerance. Problems here are tiny (tens of
// columns, a handful of rows), so no factorization machinery is needed.
LpResult solve_lp(const Table2<double>& A, const std::vector<double>& b,
                  const std::vector<double>& c, double eps);

}  // namespace nostcap::detail
