#include "lplra/oracle.hpp"

#include "lplra/enumeration.hpp"
#include "lplra/errors.hpp"
#include "lplra/linalg.hpp"
#include "lplra/regression.hpp"
#include "lplra/rng.hpp"
#include "lplra/svd.hpp"
#include "lplra/threading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lplra {

Matrix perturb(const Matrix& a, double gamma, std::uint64_t seed) {
  if (!(gamma > 0.0)) throw std::invalid_argument("perturb: gamma must be positive");
  Rng rng(seed);
  Matrix out = a;
  for (double& x : out.data()) x += rng.uniform(-gamma, gamma);
  return out;
}

PlantedInstance make_planted(std::size_t n, std::size_t m, std::size_t k, PNormSpec p,
                             double delta_scale, std::uint64_t seed) {
  if (k == 0 || k > std::min(n, m)) throw std::invalid_argument("make_planted: bad k");
  Rng rng(Rng::mix(seed, 0x9fa1ca7eULL));

  Matrix left(n, k), right(k, m);
  for (double& x : left.data()) x = rng.uniform(-1.0, 1.0);
  for (double& x : right.data()) x = rng.uniform(-1.0, 1.0);
  Matrix a_star = multiply(left, right);

  Matrix delta(n, m);
  if (delta_scale > 0.0) {
    for (double& x : delta.data()) x = rng.uniform(-delta_scale, delta_scale);
  }
  const double gamma = 1e-9 * std::max(a_star.max_abs(), 1.0);
  delta = perturb(delta, gamma, Rng::mix(seed, 0x7e57));

  PlantedInstance inst;
  inst.a_star = a_star;
  inst.delta = delta;
  inst.a = a_star + delta;
  inst.k = k;
  inst.p = p;
  inst.delta_norm = entrywise_norm(delta, p);
  inst.per_column_delta = column_norms(delta, p);
  inst.left_factor = std::move(left);
  inst.right_factor = std::move(right);
  return inst;
}

namespace {

// right factor of the column-normalized ground truth at rank k. Any rank-k
// factorization works here: replacing V by G*V scales every k-subset
// determinant by det(G), so the argmax subset and the Cramer ratios are
// unchanged.
Matrix normalized_right_factor(const PlantedInstance& inst) {
  Matrix scaled = inst.a_star;
  for (std::size_t j = 0; j < scaled.cols(); ++j) {
    const double d = inst.per_column_delta[j];
    if (!(d > 0.0)) throw std::invalid_argument("max_determinant_select: a delta column has zero norm");
    for (std::size_t i = 0; i < scaled.rows(); ++i) scaled(i, j) /= d;
  }
  auto [svd, f] = truncated_svd(scaled, inst.k);
  (void)svd;
  return f.v;
}

} // namespace

std::vector<std::size_t> max_determinant_select(const PlantedInstance& inst, std::uint64_t budget) {
  const std::size_t m = inst.a.cols(), k = inst.k;
  const std::uint64_t count = binomial(m, k);
  if (count > budget) {
    std::ostringstream msg;
    msg << "max_determinant_select: C(" << m << "," << k << ") = " << count << " exceeds budget "
        << budget;
    throw RefusalError(msg.str());
  }

  const Matrix vt = normalized_right_factor(inst);

  std::vector<double> dets(count, 0.0);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (long long t = 0; t < static_cast<long long>(count); ++t) {
    const auto subset = subset_at_rank(m, k, static_cast<std::uint64_t>(t));
    Matrix sub(k, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < k; ++i) sub(i, j) = vt(i, subset[j]);
    dets[t] = std::fabs(linalg::determinant(sub));
  }

  std::uint64_t best = 0;
  for (std::uint64_t t = 1; t < count; ++t) {
    if (dets[t] > dets[best] * (1.0 + 1e-12)) best = t;
  }
  return subset_at_rank(m, k, best);
}

std::vector<double> reconstruction_coefficients(const PlantedInstance& inst,
                                                const std::vector<std::size_t>& subset,
                                                std::size_t column) {
  const Matrix vt = normalized_right_factor(inst);
  const std::size_t k = inst.k;
  Matrix vs(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i) vs(i, j) = vt(i, subset[j]);
  std::vector<double> vi(k);
  for (std::size_t i = 0; i < k; ++i) vi[i] = vt(i, column);
  return linalg::solve_dense(vs, vi);
}

Factorization certificate_factorization(const PlantedInstance& inst,
                                        const std::vector<std::size_t>& subset) {
  const std::size_t k = inst.k, m = inst.a.cols();
  Matrix v(k, m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::vector<double> mi = reconstruction_coefficients(inst, subset, i);
    for (std::size_t j = 0; j < k; ++j) {
      v(j, i) = inst.per_column_delta[i] * mi[j] / inst.per_column_delta[subset[j]];
    }
  }
  Factorization f;
  f.u = inst.a.columns(subset);
  f.v = std::move(v);
  f.source_columns = subset;
  f.rank_budget = k;
  return f;
}

double brute_force_opt(const Matrix& a, std::size_t k, PNormSpec p, int restarts,
                       std::uint64_t seed) {
  const std::size_t n = a.rows(), m = a.cols();
  if (n > 8 || m > 8 || k > 2) {
    throw RefusalError("brute_force_opt: sized for n, m <= 8 and k <= 2 only");
  }
  RegressionConfig cfg;

  std::vector<Matrix> starts;
  const std::uint64_t subsets = binomial(m, k);
  for (std::uint64_t t = 0; t < subsets; ++t) {
    starts.push_back(a.columns(subset_at_rank(m, k, t)));
  }
  for (int t = 0; t < restarts; ++t) {
    Rng rng(Rng::mix(seed, 0xb00f, t));
    Matrix u(n, k);
    for (double& x : u.data()) x = rng.uniform(-1.0, 1.0);
    starts.push_back(std::move(u));
  }

  std::vector<double> finals(starts.size(), 0.0);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (long long s = 0; s < static_cast<long long>(starts.size()); ++s) {
    Matrix u = starts[s];
    const Matrix at = a.transposed();
    double best = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 50; ++round) {
      MultiRegressionResult vfit = solve_multi_regression_reference(u, a, p, cfg);
      const double err = residual_norm(a, Factorization{u, vfit.v, std::nullopt, k}, p);
      const bool improved =
          !std::isfinite(best) || err < best - 1e-9 * std::max(best, 1.0);
      best = std::min(best, err);
      if (!improved) break;
      // row i of a regressed on v^T gives the new row i of u
      const Matrix vt = vfit.v.transposed(); // m x k
      Matrix unew(n, k);
      for (std::size_t i = 0; i < n; ++i) {
        RegressionResult row = solve_regression(vt, at.column(i), p, cfg);
        for (std::size_t j = 0; j < k; ++j) unew(i, j) = row.y[j];
      }
      u = std::move(unew);
    }
    finals[s] = best;
  }
  double best = finals[0];
  for (double e : finals) best = std::min(best, e);
  return best;
}

LowerBoundInstance lower_bound_instance(std::size_t k) {
  if (k == 0) throw std::invalid_argument("lower_bound_instance: k must be >= 1");
  const std::size_t d = k + 1;
  Matrix a(d, d);
  Matrix b(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      a(i, j) = i == j ? static_cast<double>(d) : 0.0;
      b(i, j) = a(i, j) - 1.0;
    }
  }
  return {std::move(a), static_cast<double>(d), std::move(b)};
}

} // namespace lplra
