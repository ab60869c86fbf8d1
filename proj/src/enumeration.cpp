#include "lplra/enumeration.hpp"

#include "lplra/errors.hpp"
#include "lplra/rng.hpp"
#include "lplra/svd.hpp"
#include "lplra/threading.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lplra {

std::uint64_t binomial(std::size_t m, std::size_t k) {
  if (k > m) return 0;
  k = std::min(k, m - k);
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t num = m - k + i;
    // result * num / i is exact at every step; guard the multiply
    if (result > UINT64_MAX / num) return UINT64_MAX;
    result = result * num / i;
  }
  return result;
}

std::vector<std::size_t> subset_at_rank(std::size_t m, std::size_t k, std::uint64_t rank) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < k; ++slot) {
    for (std::size_t cand = next;; ++cand) {
      const std::uint64_t block = binomial(m - cand - 1, k - slot - 1);
      if (rank < block) {
        out.push_back(cand);
        next = cand + 1;
        break;
      }
      rank -= block;
    }
  }
  return out;
}

namespace {

bool next_combination(std::vector<std::size_t>& s, std::size_t m) {
  const std::size_t k = s.size();
  for (std::size_t i = k; i-- > 0;) {
    if (s[i] < m - k + i) {
      ++s[i];
      for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double evaluate_subset(const Matrix& a, const std::vector<std::size_t>& s, PNormSpec p,
                       const RegressionConfig& cfg) {
  const Matrix u = a.columns(s);
  MultiRegressionResult fit = solve_multi_regression_reference(u, a, p, cfg);
  Factorization f{u, fit.v, std::nullopt, s.size()};
  return residual_norm(a, f, p);
}

// smaller-is-better with the 1e-12 relative tie band resolved toward the
// earlier candidate
bool strictly_better(double cand, double best) {
  return cand < best - 1e-12 * std::max(std::fabs(best), std::fabs(cand));
}

} // namespace

double subset_error(const Matrix& a, std::span<const std::size_t> s, PNormSpec p,
                    const RegressionConfig& cfg) {
  std::set<std::size_t> seen;
  for (std::size_t idx : s) {
    if (idx >= a.cols()) {
      throw std::invalid_argument("subset_error: column index " + std::to_string(idx) +
                                  " out of range for " + std::to_string(a.cols()) + " columns");
    }
    if (!seen.insert(idx).second) {
      throw std::invalid_argument("subset_error: duplicate column index " + std::to_string(idx));
    }
  }
  std::vector<std::size_t> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  return evaluate_subset(a, sorted, p, cfg);
}

SubsetSearchOutcome best_subset(const Matrix& a, std::size_t k, PNormSpec p,
                                const SubsetSearchConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t m = a.cols();
  if (k == 0 || k > m) throw std::invalid_argument("best_subset: k must be in [1, m]");

  std::vector<std::vector<std::size_t>> candidates;
  std::uint64_t count = 0;
  const bool exhaustive = cfg.strategy == SubsetSearchConfig::Strategy::Exhaustive;
  if (exhaustive) {
    count = binomial(m, k);
    if (count > cfg.exhaustive_budget) {
      std::ostringstream msg;
      msg << "best_subset: exhaustive search over C(" << m << "," << k << ") = " << count
          << " subsets exceeds the budget of " << cfg.exhaustive_budget
          << "; use the sampled strategy";
      throw RefusalError(msg.str());
    }
  } else {
    if (cfg.trials == 0) throw std::invalid_argument("best_subset: sampled trials must be >= 1");
    count = cfg.trials;
    candidates.resize(count);
    for (std::uint64_t t = 0; t < count; ++t) {
      Rng rng(Rng::mix(cfg.seed, t));
      candidates[t] = sample_without_replacement(m, k, rng);
    }
  }

  std::vector<double> errors(count, 0.0);
  if (exhaustive) {
    // chunked so each worker walks consecutive subsets with O(k) increments
    const std::uint64_t chunk = std::max<std::uint64_t>(1, count / (16 * max_threads()) + 1);
    const std::uint64_t nchunks = (count + chunk - 1) / chunk;
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (long long ci = 0; ci < static_cast<long long>(nchunks); ++ci) {
      const std::uint64_t lo = static_cast<std::uint64_t>(ci) * chunk;
      const std::uint64_t hi = std::min(lo + chunk, count);
      std::vector<std::size_t> subset = subset_at_rank(m, k, lo);
      for (std::uint64_t t = lo; t < hi; ++t) {
        errors[t] = evaluate_subset(a, subset, p, cfg.regression);
        if (t + 1 < hi) next_combination(subset, m);
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (long long t = 0; t < static_cast<long long>(count); ++t) {
      errors[t] = evaluate_subset(a, candidates[t], p, cfg.regression);
    }
  }

  // serial argmin in enumeration order: lexicographic tie-break for free in
  // exhaustive mode, explicit subset comparison in sampled mode
  std::uint64_t best_idx = 0;
  double best_err = errors[0];
  for (std::uint64_t t = 1; t < count; ++t) {
    if (strictly_better(errors[t], best_err)) {
      best_err = errors[t];
      best_idx = t;
    } else if (!exhaustive && !strictly_better(best_err, errors[t])) {
      if (candidates[t] < candidates[best_idx]) best_idx = t;
    }
  }

  const std::vector<std::size_t> best =
      exhaustive ? subset_at_rank(m, k, best_idx) : candidates[best_idx];

  const Matrix u = a.columns(best);
  MultiRegressionResult fit = solve_multi_regression(u, a, p, cfg.regression);
  Factorization f{u, fit.v, best, k};

  SubsetSearchOutcome out;
  out.factorization = std::move(f);
  out.report.algorithm = exhaustive ? "exhaustive" : "sampled";
  out.report.error_p = errors[best_idx];
  out.report.delta2 = estimate_delta2(a, std::min(k, std::min(a.rows(), a.cols())));
  out.report.seed = cfg.seed;
  out.report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

} // namespace lplra
