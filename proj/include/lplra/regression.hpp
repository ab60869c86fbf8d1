#pragma once

#include "lplra/matrix.hpp"
#include "lplra/pnorm.hpp"

#include <span>
#include <vector>

namespace lplra {

enum class RegressionMode { Exact, Iterative, Auto };

struct RegressionConfig {
  double tol = 1e-8;             // relative convergence tolerance
  int max_iter = 500;            // IRLS iteration cap
  double epsilon_weight = 1e-12; // smoothing floor for the reweighting
  RegressionMode mode = RegressionMode::Auto;
};

struct RegressionResult {
  std::vector<double> y;
  double residual = 0.0;
  bool converged = true;
  bool lp_fallback = false; // exact mode fell back to the iterative path
};

/// min_y |u*y - v|_p. The general-p path is damped iteratively reweighted
/// least squares; p in {1, inf} can be solved exactly as a linear program.
/// Auto picks the exact LP for p in {1, inf} on problems small enough for it.
RegressionResult solve_regression(const Matrix& u, std::span<const double> v, PNormSpec p,
                                  const RegressionConfig& cfg = {});

/// Exact LP mode; p must be exactly 1 or infinity. On LP solver failure the
/// result comes from the iterative path with lp_fallback set.
RegressionResult solve_exact_lp(const Matrix& u, std::span<const double> v, PNormSpec p,
                                const RegressionConfig& cfg = {});

struct MultiRegressionResult {
  Matrix v; // r x m coefficient matrix
  std::vector<double> column_residuals;
  bool all_converged = true;
};

/// Column-by-column regression of a's columns onto u; columns run on the
/// OpenMP workers and each column's solve is self-contained, so the result
/// does not depend on scheduling.
MultiRegressionResult solve_multi_regression(const Matrix& u, const Matrix& a, PNormSpec p,
                                             const RegressionConfig& cfg = {});
/// Serial twin of `solve_multi_regression`; bitwise-identical output.
MultiRegressionResult solve_multi_regression_reference(const Matrix& u, const Matrix& a,
                                                       PNormSpec p,
                                                       const RegressionConfig& cfg = {});

} // namespace lplra
