#include "lplra/adaptive.hpp"

#include "lplra/errors.hpp"
#include "lplra/linalg.hpp"
#include "lplra/rng.hpp"
#include "lplra/svd.hpp"
#include "lplra/threading.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lplra {

CoverageParams CoverageParams::make(double n_guess, std::size_t k, std::size_t n_rows,
                                    std::size_t m_cols, PNormSpec p) {
  if (!(n_guess > 0.0)) throw std::invalid_argument("CoverageParams: n_guess must be positive");
  CoverageParams cov;
  cov.n_guess = n_guess;
  cov.c_p = p.is_infinity() ? 2.0 : std::pow(2.0, p.exponent());
  cov.k = k;
  cov.n_rows = n_rows;
  cov.m_cols = m_cols;
  cov.p = p;
  return cov;
}

double CoverageParams::threshold() const {
  const double kk = static_cast<double>(k + 1);
  if (p.is_infinity()) return c_p * kk * n_guess;
  const double pe = p.exponent();
  // (c_p * 100 / n)^(1/p) * (k+1) * N, computed in root form to stay finite
  // for large exponents
  return std::pow(c_p, 1.0 / pe) * std::pow(100.0 / static_cast<double>(n_rows), 1.0 / pe) * kk *
         n_guess;
}

namespace {

RegressionConfig coverage_regression(const CoverageParams& cov, const RegressionConfig& cfg) {
  RegressionConfig out = cfg;
  if (out.mode == RegressionMode::Auto) {
    out.mode = (cov.p.is_infinity() || cov.p == PNormSpec::finite(1.0)) ? RegressionMode::Exact
                                                                        : RegressionMode::Iterative;
  }
  return out;
}

// |w|_p >= lower_factor * |w|_2 for w in R^n
double lp_from_l2_lower_factor(std::size_t n, PNormSpec p) {
  if (p.is_infinity()) return 1.0 / std::sqrt(static_cast<double>(n));
  const double pe = p.exponent();
  if (pe <= 2.0) return 1.0;
  return std::pow(static_cast<double>(n), 1.0 / pe - 0.5);
}

} // namespace

bool is_covered(const Matrix& a_s, std::span<const double> a_i, const CoverageParams& cov,
                const RegressionConfig& cfg) {
  if (a_i.size() != a_s.rows()) throw std::invalid_argument("is_covered: length mismatch");
  RegressionResult fit = solve_regression(a_s, a_i, cov.p, coverage_regression(cov, cfg));
  if (!fit.converged) return false; // conservative: recurse on this column
  return fit.residual <= cov.threshold();
}

double covered_fraction(const Matrix& a, std::span<const std::size_t> r_set,
                        const CoverageParams& cov, const RegressionConfig& cfg) {
  const std::size_t m = a.cols(), n = a.rows();
  const Matrix a_r = a.columns(r_set);
  const double thr = cov.threshold();
  const RegressionConfig reg = coverage_regression(cov, cfg);

  // One orthonormal basis of span(a_r) serves every column: the projection
  // residual gives the exact l2 minimum, which brackets the lp minimum from
  // both sides and settles most columns without a full solve.
  const linalg::PivotedQr qr = linalg::pivoted_qr(a_r, 1e-12);
  const double lower_factor = lp_from_l2_lower_factor(n, cov.p);

  std::vector<char> covered(m, 0);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (long long jj = 0; jj < static_cast<long long>(m); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    if (std::find(r_set.begin(), r_set.end(), j) != r_set.end()) {
      covered[j] = 1; // members of R sit in their own span
      continue;
    }
    const std::vector<double> col = a.column(j);
    const std::vector<double> res2 = linalg::projection_residual(qr.q, col);
    const double l2 = linalg::norm2(res2);
    const double upper = vector_norm(res2, cov.p); // residual at the l2 point
    if (upper <= thr) {
      covered[j] = 1;
      continue;
    }
    if (l2 * lower_factor > thr) {
      covered[j] = 0;
      continue;
    }
    covered[j] = is_covered(a_r, col, cov, reg) ? 1 : 0;
  }

  std::size_t hits = 0;
  for (char c : covered) hits += c;
  return static_cast<double>(hits) / static_cast<double>(m);
}

namespace {

struct RoundOutcome {
  std::vector<char> covered; // over the remaining columns
  double fraction = 0.0;
};

RoundOutcome evaluate_round(const Matrix& a, const std::vector<std::size_t>& remaining,
                            const std::vector<std::size_t>& sampled_local,
                            const CoverageParams& cov, const RegressionConfig& reg) {
  const std::size_t mrem = remaining.size();
  std::vector<std::size_t> sampled_global(sampled_local.size());
  for (std::size_t t = 0; t < sampled_local.size(); ++t)
    sampled_global[t] = remaining[sampled_local[t]];
  const Matrix a_r = a.columns(sampled_global);
  const double thr = cov.threshold();
  const linalg::PivotedQr qr = linalg::pivoted_qr(a_r, 1e-12);
  const double lower_factor = lp_from_l2_lower_factor(a.rows(), cov.p);

  RoundOutcome out;
  out.covered.assign(mrem, 0);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (long long tt = 0; tt < static_cast<long long>(mrem); ++tt) {
    const auto t = static_cast<std::size_t>(tt);
    if (std::find(sampled_local.begin(), sampled_local.end(), t) != sampled_local.end()) {
      out.covered[t] = 1;
      continue;
    }
    const std::vector<double> col = a.column(remaining[t]);
    const std::vector<double> res2 = linalg::projection_residual(qr.q, col);
    const double upper = vector_norm(res2, cov.p);
    if (upper <= thr) {
      out.covered[t] = 1;
      continue;
    }
    if (linalg::norm2(res2) * lower_factor > thr) {
      out.covered[t] = 0;
      continue;
    }
    out.covered[t] = is_covered(a_r, col, cov, reg) ? 1 : 0;
  }
  std::size_t hits = 0;
  for (char c : out.covered) hits += c;
  out.fraction = static_cast<double>(hits) / static_cast<double>(mrem);
  return out;
}

} // namespace

SelectColumnsResult select_columns(const Matrix& a, std::size_t k, PNormSpec p,
                                   const CoverageParams& cov_template, std::uint64_t seed,
                                   const AdaptiveConfig& cfg) {
  if (k == 0) throw std::invalid_argument("select_columns: k must be >= 1");
  if (!(p == cov_template.p)) {
    throw std::invalid_argument("select_columns: p disagrees with the coverage parameters");
  }
  const std::size_t m = a.cols();
  const std::size_t sample_size = cfg.expert_sample_size > 0 ? cfg.expert_sample_size : 2 * k;
  const double need_fraction =
      cfg.expert_coverage_fraction > 0.0 ? cfg.expert_coverage_fraction : 0.1;
  const RegressionConfig reg = coverage_regression(cov_template, cfg.regression);

  // ceil(log_{10/9} m): the hard depth implied by removing a 1/10 fraction
  const std::size_t depth_cap = static_cast<std::size_t>(
      std::ceil(std::log(static_cast<double>(std::max<std::size_t>(m, 2))) /
                std::log(10.0 / 9.0)));

  SelectColumnsResult result;
  result.n_guess = cov_template.n_guess;

  std::vector<std::size_t> remaining(m);
  for (std::size_t j = 0; j < m; ++j) remaining[j] = j;
  std::vector<std::size_t> selected;

  std::size_t round = 0;
  while (true) {
    if (remaining.size() <= sample_size) {
      selected.insert(selected.end(), remaining.begin(), remaining.end());
      result.trace.rounds.push_back({remaining, 1.0, 0});
      break;
    }
    if (round >= depth_cap) {
      throw std::logic_error("select_columns: recursion depth exceeded its structural bound");
    }

    bool accepted = false;
    for (int attempt = 0; attempt < cfg.attempts_per_round; ++attempt) {
      Rng rng(Rng::mix(seed, round, static_cast<std::uint64_t>(attempt)));
      const std::vector<std::size_t> sampled_local =
          sample_without_replacement(remaining.size(), sample_size, rng);
      RoundOutcome outcome = evaluate_round(a, remaining, sampled_local, cov_template, reg);
      if (outcome.fraction + 1e-15 < need_fraction) continue;

      std::vector<std::size_t> sampled_global(sample_size);
      for (std::size_t t = 0; t < sample_size; ++t)
        sampled_global[t] = remaining[sampled_local[t]];
      selected.insert(selected.end(), sampled_global.begin(), sampled_global.end());
      result.trace.rounds.push_back({sampled_global, outcome.fraction, attempt + 1});

      std::vector<std::size_t> next;
      for (std::size_t t = 0; t < remaining.size(); ++t)
        if (!outcome.covered[t]) next.push_back(remaining[t]);
      remaining = std::move(next);
      accepted = true;
      break;
    }
    if (!accepted) {
      result.ok = false;
      result.trace.attempts_cap_hit = true;
      result.failed_round = round + 1;
      result.trace.total_columns = selected.size();
      return result;
    }
    ++round;
  }

  std::sort(selected.begin(), selected.end());
  result.ok = true;
  result.columns = std::move(selected);
  result.trace.total_columns = result.columns.size();
  return result;
}

std::vector<double> n_guess_grid(double delta2, PNormSpec p, std::size_t n_rows,
                                 double zero_scale_hint) {
  if (delta2 < 0.0) throw std::invalid_argument("n_guess_grid: delta2 must be >= 0");
  if (delta2 == 0.0) {
    return {1e-12 * std::max(zero_scale_hint, 1e-300)};
  }
  const double n = static_cast<double>(std::max<std::size_t>(n_rows, 2));
  // printed comparison bounds: p < 2: delta2 <= |D|_p <= n^(2-p) delta2;
  // p >= 2: n^-(1-2/p) delta2 <= |D|_p <= delta2 (p = inf: exponent 1)
  double lo, hi;
  if (!p.is_infinity() && p.exponent() < 2.0) {
    lo = delta2;
    hi = delta2 * std::pow(n, 2.0 - p.exponent());
  } else {
    const double expo = p.is_infinity() ? 1.0 : 1.0 - 2.0 / p.exponent();
    lo = delta2 * std::pow(n, -expo);
    hi = delta2;
  }
  lo *= 0.5; // widen one factor of 2 per side
  hi *= 2.0;

  std::vector<double> grid;
  for (double g = lo; g < hi * (1.0 + 1e-12); g *= 2.0) grid.push_back(g);
  if (grid.empty() || grid.back() < hi * (1.0 - 1e-12)) grid.push_back(hi);
  return grid;
}

BicriteriaOutcome bicriteria_approx(const Matrix& a, std::size_t k, PNormSpec p,
                                    std::uint64_t seed, const AdaptiveConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = a.rows(), m = a.cols();
  if (k == 0 || k > std::min(n, m)) throw std::invalid_argument("bicriteria_approx: bad k");

  const double delta2 = estimate_delta2(a, k);
  const std::vector<double> grid = n_guess_grid(delta2, p, n, entrywise_norm(a, p));

  bool have_best = false;
  double best_err = std::numeric_limits<double>::infinity();
  double best_guess = 0.0;
  Factorization best_f;
  SelectionTrace best_trace;

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const CoverageParams cov = CoverageParams::make(grid[gi], k, n, m, p);
    SelectColumnsResult sel = select_columns(a, k, p, cov, Rng::mix(seed, gi), cfg);
    if (!sel.ok) continue;

    const Matrix u = a.columns(sel.columns);
    MultiRegressionResult fit = solve_multi_regression(u, a, p, cfg.regression);
    Factorization f{u, fit.v, sel.columns, sel.columns.size()};
    const double err = residual_norm(a, f, p);
    if (!have_best || err < best_err * (1.0 - 1e-12)) {
      have_best = true;
      best_err = err;
      best_guess = grid[gi];
      best_f = std::move(f);
      best_trace = std::move(sel.trace);
    }
  }

  if (!have_best) {
    std::ostringstream msg;
    msg << "bicriteria_approx: every guess failed; grid spanned [" << grid.front() << ", "
        << grid.back() << "]";
    throw RefusalError(msg.str());
  }

  BicriteriaOutcome out;
  out.factorization = std::move(best_f);
  out.trace = std::move(best_trace);
  out.report.algorithm = "bicriteria";
  out.report.error_p = best_err;
  out.report.delta2 = delta2;
  out.report.seed = seed;
  out.report.n_guess = best_guess;
  out.report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

} // namespace lplra
