#pragma once

#include "lplra/matrix.hpp"

#include <vector>

namespace lplra::lp {

enum class LpStatus { Optimal, Unbounded, Infeasible, IterationLimit };

struct LpResult {
  std::vector<double> x;
  double objective = 0.0;
  LpStatus status = LpStatus::Optimal;
};

/// min c.x  subject to  a x <= b, x >= 0. Dense two-phase simplex with a
/// Dantzig rule that switches to Bland's rule after a stall, so it always
/// terminates. Sized for the small regression LPs this project solves.
LpResult solve_inequality_form(const Matrix& a, const std::vector<double>& b,
                               const std::vector<double>& c, int max_pivots = 0);

} // namespace lplra::lp
