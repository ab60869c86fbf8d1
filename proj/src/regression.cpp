#include "lplra/regression.hpp"

#include "lplra/linalg.hpp"
#include "lplra/simplex.hpp"
#include "lplra/threading.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lplra {

namespace {

// exponent substituted for p = infinity inside the IRLS loop
constexpr double kInfinitySurrogate = 64.0;
// exact-LP polish kicks in for p = infinity up to this many columns
constexpr std::size_t kInfinityPolishMaxCols = 32;
// Auto picks the exact LP below these sizes for p in {1, inf}
constexpr std::size_t kAutoExactMaxRows = 512;
constexpr std::size_t kAutoExactMaxCols = 32;

std::vector<double> residual_vector(const Matrix& u, std::span<const double> y,
                                    std::span<const double> v) {
  std::vector<double> r = linalg::apply(u, y);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= v[i];
  return r;
}

double norm_of(const Matrix& u, std::span<const double> y, std::span<const double> v,
               PNormSpec p) {
  return vector_norm(residual_vector(u, y, v), p);
}

RegressionResult solve_iterative(const Matrix& u, std::span<const double> v, PNormSpec p,
                                 const RegressionConfig& cfg) {
  const std::size_t n = u.rows();
  const double vscale = vector_norm(v, PNormSpec::infinity());

  RegressionResult out;
  out.y = linalg::least_squares(u, v);
  if (p == PNormSpec::finite(2.0)) {
    out.residual = norm_of(u, out.y, v, p);
    return out;
  }

  const double pe = p.is_infinity() ? kInfinitySurrogate : p.exponent();
  const PNormSpec work_norm = PNormSpec::finite(pe);

  const std::size_t c = u.cols();
  std::vector<double> y = out.y;
  double f = norm_of(u, y, v, work_norm);
  bool converged = false;

  // For p < 2 the weights blow up as residuals vanish; a decreasing smoothing
  // schedule (ending at the configured floor) avoids the flat-spot stall that
  // a fixed tiny floor produces. For p >= 2 one level suffices.
  const double scale0 = std::max(vscale, 1e-30);
  double eps = pe < 2.0 ? 1e-2 * scale0 : cfg.epsilon_weight;
  const double eps_floor = cfg.epsilon_weight;

  // reused buffers for the weighted normal-equations solve
  std::vector<double> r(n), w(n), cand(c), trial(c), rhs(c);
  Matrix gram(c, c);

  int iter = 0;
  while (iter < cfg.max_iter) {
    const bool last_level = eps <= eps_floor;
    // intermediate levels only need a coarse solve; the floor level converges
    // to the configured tolerance
    const double level_tol = last_level ? cfg.tol : std::max(cfg.tol, 1e-4);
    bool level_done = false;
    for (; iter < cfg.max_iter && !level_done; ++iter) {
      r = residual_vector(u, y, v);
      double rmax = 0.0;
      for (double x : r) rmax = std::max(rmax, std::fabs(x));
      if (rmax <= 1e-15 * std::max(vscale, 1.0)) {
        converged = true;
        level_done = true;
        eps = eps_floor;
        break;
      }
      // weights normalized by the largest residual: scale-free and safe for
      // large exponents
      for (std::size_t i = 0; i < n; ++i) {
        const double ratio = (std::fabs(r[i]) + eps) / (rmax + eps);
        w[i] = std::pow(ratio, pe - 2.0);
      }
      // ridge-regularized normal equations in fixed storage
      std::fill(gram.data().begin(), gram.data().end(), 0.0);
      std::fill(rhs.begin(), rhs.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const auto row = u.row_span(i);
        const double wi = w[i];
        for (std::size_t a = 0; a < c; ++a) {
          const double wa = wi * row[a];
          rhs[a] += wa * v[i];
          for (std::size_t b = a; b < c; ++b) gram(a, b) += wa * row[b];
        }
      }
      double trace = 0.0;
      for (std::size_t a = 0; a < c; ++a) trace += gram(a, a);
      for (std::size_t a = 0; a < c; ++a) {
        gram(a, a) += 1e-12 * std::max(trace, 1e-300);
        for (std::size_t b = 0; b < a; ++b) gram(a, b) = gram(b, a);
      }
      try {
        cand = linalg::solve_dense(gram, rhs);
      } catch (const std::runtime_error&) {
        cand = linalg::weighted_ridge_ls(u, w, v);
      }

      // halve the step while the objective would increase
      double alpha = 1.0;
      double f_trial = 0.0;
      bool improved = false;
      for (int halvings = 0; halvings < 40; ++halvings) {
        for (std::size_t j = 0; j < c; ++j) trial[j] = y[j] + alpha * (cand[j] - y[j]);
        f_trial = norm_of(u, trial, v, work_norm);
        if (f_trial <= f) {
          improved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!improved) {
        level_done = true; // no descent left at this smoothing level
        break;
      }
      const double drop = f - f_trial;
      y = trial;
      f = f_trial;
      if (drop <= level_tol * std::max(f, 1e-300)) level_done = true;
    }
    if (last_level) {
      converged = converged || level_done;
      break;
    }
    eps = std::max(eps * 0.1, eps_floor);
  }

  // p = 1: the optimum interpolates rank-many rows. Walk the vertices
  // suggested by the smallest residuals (all c-subsets of the c+3 nearest
  // rows per round) and keep improvements.
  if (pe == 1.0 && !p.is_infinity() && c <= n) {
    auto snap_candidate = [&](const std::vector<std::size_t>& rows) {
      Matrix sub(rows.size(), c);
      std::vector<double> sub_rhs(rows.size());
      for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t j = 0; j < c; ++j) sub(t, j) = u(rows[t], j);
        sub_rhs[t] = v[rows[t]];
      }
      return linalg::least_squares(sub, sub_rhs);
    };
    double fcur = norm_of(u, y, v, p);
    std::vector<std::size_t> order(n);
    for (int round = 0; round < 4; ++round) {
      r = residual_vector(u, y, v);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return std::fabs(r[a]) < std::fabs(r[b]); });
      const std::size_t pool = std::min(c + 3, n);
      bool improved = false;
      std::vector<std::size_t> pick(c);
      for (std::size_t j = 0; j < c; ++j) pick[j] = j;
      while (true) {
        std::vector<std::size_t> rows(c);
        for (std::size_t j = 0; j < c; ++j) rows[j] = order[pick[j]];
        const std::vector<double> snap = snap_candidate(rows);
        const double fs = norm_of(u, snap, v, p);
        if (fs < fcur * (1.0 - 1e-13)) {
          y = snap;
          fcur = fs;
          improved = true;
        }
        // next c-subset of the pool, lexicographically
        bool advanced = false;
        for (std::size_t j = c; j-- > 0;) {
          if (pick[j] < pool - c + j) {
            ++pick[j];
            for (std::size_t t = j + 1; t < c; ++t) pick[t] = pick[t - 1] + 1;
            advanced = true;
            break;
          }
        }
        if (!advanced) break;
      }
      if (round == 0) {
        // the least-squares fit of the 2c nearest rows is a useful extra seed
        std::vector<std::size_t> rows(std::min(2 * c, n));
        for (std::size_t t = 0; t < rows.size(); ++t) rows[t] = order[t];
        const std::vector<double> snap = snap_candidate(rows);
        const double fs = norm_of(u, snap, v, p);
        if (fs < fcur * (1.0 - 1e-13)) {
          y = snap;
          fcur = fs;
          improved = true;
        }
      }
      if (!improved) break;
    }
  }

  out.y = std::move(y);
  out.converged = converged;

  if (p.is_infinity() && u.cols() <= kInfinityPolishMaxCols) {
    // the Chebyshev LP is small: polish the surrogate solution exactly
    RegressionResult lp = solve_exact_lp(u, v, p, cfg);
    if (!lp.lp_fallback) {
      const double irls_res = norm_of(u, out.y, v, p);
      if (lp.residual <= irls_res) {
        lp.converged = true;
        return lp;
      }
    }
  }

  out.residual = norm_of(u, out.y, v, p);
  return out;
}

// LP variables for p=1: [y+ (r), y- (r), t (n)], constraints
//   u y - t <= v  and  -u y - t <= -v, minimize sum t.
// For p=inf a single slack t replaces the vector.
RegressionResult chebyshev_or_l1_lp(const Matrix& u, std::span<const double> v, bool linf) {
  const std::size_t n = u.rows(), r = u.cols();
  const std::size_t nt = linf ? 1 : n;
  const std::size_t nvar = 2 * r + nt;

  Matrix a(2 * n, nvar);
  std::vector<double> b(2 * n);
  std::vector<double> c(nvar, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      a(i, j) = u(i, j);
      a(i, r + j) = -u(i, j);
      a(n + i, j) = -u(i, j);
      a(n + i, r + j) = u(i, j);
    }
    const std::size_t ti = linf ? 0 : i;
    a(i, 2 * r + ti) = -1.0;
    a(n + i, 2 * r + ti) = -1.0;
    b[i] = v[i];
    b[n + i] = -v[i];
  }
  for (std::size_t t = 0; t < nt; ++t) c[2 * r + t] = 1.0;

  lp::LpResult sol = lp::solve_inequality_form(a, b, c);
  RegressionResult out;
  if (sol.status != lp::LpStatus::Optimal) {
    out.lp_fallback = true;
    return out;
  }
  out.y.resize(r);
  for (std::size_t j = 0; j < r; ++j) out.y[j] = sol.x[j] - sol.x[r + j];
  out.residual = norm_of(u, out.y, v, linf ? PNormSpec::infinity() : PNormSpec::finite(1.0));
  return out;
}

bool auto_prefers_exact(const Matrix& u, PNormSpec p) {
  if (!p.is_infinity() && p != PNormSpec::finite(1.0)) return false;
  return u.rows() <= kAutoExactMaxRows && u.cols() <= kAutoExactMaxCols;
}

} // namespace

RegressionResult solve_exact_lp(const Matrix& u, std::span<const double> v, PNormSpec p,
                                const RegressionConfig& cfg) {
  if (!p.is_infinity() && p != PNormSpec::finite(1.0)) {
    throw std::invalid_argument("solve_exact_lp: p must be exactly 1 or infinity");
  }
  if (v.size() != u.rows()) throw std::invalid_argument("solve_exact_lp: length mismatch");
  RegressionResult out = chebyshev_or_l1_lp(u, v, p.is_infinity());
  if (out.lp_fallback) {
    RegressionConfig iter_cfg = cfg;
    iter_cfg.mode = RegressionMode::Iterative;
    RegressionResult fallback = solve_iterative(u, v, p, iter_cfg);
    fallback.lp_fallback = true;
    return fallback;
  }
  return out;
}

RegressionResult solve_regression(const Matrix& u, std::span<const double> v, PNormSpec p,
                                  const RegressionConfig& cfg) {
  if (u.empty()) throw std::invalid_argument("solve_regression: empty design matrix");
  if (v.size() != u.rows()) throw std::invalid_argument("solve_regression: length mismatch");

  switch (cfg.mode) {
    case RegressionMode::Exact:
      return solve_exact_lp(u, v, p, cfg);
    case RegressionMode::Iterative:
      return solve_iterative(u, v, p, cfg);
    case RegressionMode::Auto:
      if (auto_prefers_exact(u, p)) return solve_exact_lp(u, v, p, cfg);
      return solve_iterative(u, v, p, cfg);
  }
  throw std::logic_error("solve_regression: unknown mode");
}

namespace {

MultiRegressionResult multi_impl(const Matrix& u, const Matrix& a, PNormSpec p,
                                 const RegressionConfig& cfg, bool parallel) {
  if (a.rows() != u.rows()) throw std::invalid_argument("solve_multi_regression: row mismatch");
  const std::size_t m = a.cols(), r = u.cols();
  MultiRegressionResult out;
  out.v = Matrix(r, m);
  out.column_residuals.assign(m, 0.0);
  std::vector<char> ok(m, 1);

#pragma omp parallel for schedule(dynamic) num_threads(max_threads()) if (parallel)
  for (long long jj = 0; jj < static_cast<long long>(m); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    RegressionResult col = solve_regression(u, a.column(j), p, cfg);
    for (std::size_t i = 0; i < r; ++i) out.v(i, j) = col.y[i];
    out.column_residuals[j] = col.residual;
    ok[j] = col.converged ? 1 : 0;
  }
  for (std::size_t j = 0; j < m; ++j)
    if (!ok[j]) out.all_converged = false;
  return out;
}

} // namespace

MultiRegressionResult solve_multi_regression(const Matrix& u, const Matrix& a, PNormSpec p,
                                             const RegressionConfig& cfg) {
  return multi_impl(u, a, p, cfg, true);
}

MultiRegressionResult solve_multi_regression_reference(const Matrix& u, const Matrix& a,
                                                       PNormSpec p, const RegressionConfig& cfg) {
  return multi_impl(u, a, p, cfg, false);
}

} // namespace lplra
