#pragma once

#include "lplra/matrix.hpp"
#include "lplra/pnorm.hpp"
#include "lplra/problem.hpp"
#include "lplra/regression.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lplra {

/// Coverage threshold data for one |Delta|_p guess N. c_p is fixed by the
/// analysis: 2^p for finite p, 2 for infinity. Both the row count n (which
/// the printed threshold divides by) and the column count m are carried.
struct CoverageParams {
  double n_guess = 1.0;
  double c_p = 4.0;
  std::size_t k = 1;
  std::size_t n_rows = 1;
  std::size_t m_cols = 1;
  PNormSpec p = PNormSpec::finite(2.0);

  static CoverageParams make(double n_guess, std::size_t k, std::size_t n_rows,
                             std::size_t m_cols, PNormSpec p);

  /// Residual threshold in plain |.|_p units: for finite p the definition
  /// bounds residual^p by c_p * 100 (k+1)^p N^p / n, for p = infinity it
  /// bounds the residual by c_p (k+1) N.
  double threshold() const;
};

/// True when min_x |a_s x - a_i|_p meets the coverage threshold. Regression
/// non-convergence counts as not covered. Uses the exact LP for p in {1, inf}
/// and the iterative solver otherwise.
bool is_covered(const Matrix& a_s, std::span<const double> a_i, const CoverageParams& cov,
                const RegressionConfig& cfg = {});

struct SelectionRound {
  std::vector<std::size_t> sampled; // global column indices (base case: all taken)
  double covered_fraction = 0.0;
  int attempts = 0;
};

struct SelectionTrace {
  std::vector<SelectionRound> rounds;
  std::size_t total_columns = 0;
  bool attempts_cap_hit = false;
};

struct AdaptiveConfig {
  int attempts_per_round = 200;
  RegressionConfig regression{};
  // Off-analysis overrides for experiments; zero keeps the fixed constants
  // (2k samples per round, 1/10 coverage fraction) from the analysis.
  std::size_t expert_sample_size = 0;
  double expert_coverage_fraction = 0.0;
};

struct SelectColumnsResult {
  bool ok = false;
  std::vector<std::size_t> columns; // ascending global indices
  SelectionTrace trace;
  std::size_t failed_round = 0; // 1-based, valid when !ok
  double n_guess = 0.0;
};

/// Repeated 2k-sampling with coverage filtering; recursion depth is capped at
/// ceil(log_{10/9} m) which the 1/10-fraction removal guarantees. Exceeding
/// the per-round attempts cap returns ok=false naming the round and guess
/// (the signal that N is too small). Deterministic given the seed.
SelectColumnsResult select_columns(const Matrix& a, std::size_t k, PNormSpec p,
                                   const CoverageParams& cov_template, std::uint64_t seed,
                                   const AdaptiveConfig& cfg = {});

/// Geometric (ratio 2) guess grid for |Delta|_p derived from |Delta|_2 via
/// the printed norm-comparison bounds, widened by one factor of 2 per side.
/// delta2 == 0 collapses to the single guess 1e-12 * zero_scale_hint.
std::vector<double> n_guess_grid(double delta2, PNormSpec p, std::size_t n_rows,
                                 double zero_scale_hint = 1.0);

struct BicriteriaOutcome {
  Factorization factorization;
  ApproxReport report;
  SelectionTrace trace;
};

/// Runs select_columns for every guess in the grid, fits V to the selected
/// columns, and keeps the lowest-error result; the report records the winning
/// guess. Throws RefusalError when every guess fails.
BicriteriaOutcome bicriteria_approx(const Matrix& a, std::size_t k, PNormSpec p,
                                    std::uint64_t seed, const AdaptiveConfig& cfg = {});

/// Fraction of a's columns covered by the column set r_set (fast two-sided
/// residual bounds, full regression only where the bounds are inconclusive;
/// decisions agree with is_covered). Exposed for the covering-probability
/// checks.
double covered_fraction(const Matrix& a, std::span<const std::size_t> r_set,
                        const CoverageParams& cov, const RegressionConfig& cfg = {});

} // namespace lplra
