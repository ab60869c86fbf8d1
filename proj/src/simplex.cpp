#include "lplra/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lplra::lp {

namespace {

constexpr double kEps = 1e-11;

// Tableau rows: one per constraint, columns: structural + slack + artificial
// + rhs. Basis holds the column index basic in each row.
struct Tableau {
  std::size_t rows, cols; // cols excludes rhs
  std::vector<double> t;  // (rows+1) x (cols+1), last row = objective
  std::vector<std::size_t> basis;

  double& at(std::size_t i, std::size_t j) { return t[i * (cols + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t[i * (cols + 1) + j]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double pv = at(pr, pc);
    for (std::size_t j = 0; j <= cols; ++j) at(pr, j) /= pv;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == pr) continue;
      const double f = at(i, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) at(i, j) -= f * at(pr, j);
    }
    basis[pr] = pc;
  }
};

// Returns false when the iteration limit was hit, sets `unbounded` when no
// ratio-test row exists.
bool run_simplex(Tableau& tb, const std::vector<bool>& allowed, long long max_pivots,
                 bool& unbounded) {
  unbounded = false;
  long long iters = 0;
  const long long bland_after = 2 * static_cast<long long>(tb.rows + tb.cols) + 64;
  while (true) {
    if (max_pivots > 0 && iters >= max_pivots) return false;
    const bool bland = iters >= bland_after;

    std::size_t pc = tb.cols;
    double best = -kEps;
    for (std::size_t j = 0; j < tb.cols; ++j) {
      if (!allowed[j]) continue;
      const double rc = tb.at(tb.rows, j);
      if (bland) {
        if (rc < -kEps) {
          pc = j;
          break;
        }
      } else if (rc < best) {
        best = rc;
        pc = j;
      }
    }
    if (pc == tb.cols) return true; // optimal

    std::size_t pr = tb.rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tb.rows; ++i) {
      const double aij = tb.at(i, pc);
      if (aij <= kEps) continue;
      const double ratio = tb.at(i, tb.cols) / aij;
      if (ratio < best_ratio - kEps ||
          (ratio < best_ratio + kEps && (pr == tb.rows || tb.basis[i] < tb.basis[pr]))) {
        best_ratio = ratio;
        pr = i;
      }
    }
    if (pr == tb.rows) {
      unbounded = true;
      return true;
    }
    tb.pivot(pr, pc);
    ++iters;
  }
}

} // namespace

LpResult solve_inequality_form(const Matrix& a, const std::vector<double>& b,
                               const std::vector<double>& c, int max_pivots) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m || c.size() != n) throw std::invalid_argument("solve_inequality_form: sizes");

  // a x + s = b with s >= 0; rows with b_i < 0 are negated and get an
  // artificial variable for the phase-1 basis.
  std::vector<std::size_t> artificial_rows;
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0.0) artificial_rows.push_back(i);
  const std::size_t n_art = artificial_rows.size();
  const std::size_t cols = n + m + n_art;

  Tableau tb;
  tb.rows = m;
  tb.cols = cols;
  tb.t.assign((m + 1) * (cols + 1), 0.0);
  tb.basis.assign(m, 0);

  std::size_t art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tb.at(i, j) = sign * a(i, j);
    tb.at(i, n + i) = sign; // slack
    tb.at(i, cols) = sign * b[i];
    if (b[i] < 0.0) {
      tb.at(i, n + m + art) = 1.0;
      tb.basis[i] = n + m + art;
      ++art;
    } else {
      tb.basis[i] = n + i;
    }
  }

  std::vector<bool> allowed(cols, true);
  const long long pivot_cap =
      max_pivots > 0 ? max_pivots : 200 * static_cast<long long>(m + cols) + 2000;

  LpResult out;
  bool unbounded = false;

  if (n_art > 0) {
    // Phase 1: minimize the sum of artificials.
    for (std::size_t j = 0; j < n_art; ++j) tb.at(m, n + m + j) = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (tb.basis[i] >= n + m) {
        for (std::size_t j = 0; j <= cols; ++j) tb.at(m, j) -= tb.at(i, j);
      }
    }
    if (!run_simplex(tb, allowed, pivot_cap, unbounded)) {
      out.status = LpStatus::IterationLimit;
      return out;
    }
    const double phase1 = -tb.at(m, cols);
    if (phase1 > 1e-7) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Drive leftover artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (tb.basis[i] >= n + m) {
        std::size_t pc = cols;
        for (std::size_t j = 0; j < n + m; ++j) {
          if (std::fabs(tb.at(i, j)) > 1e-8) {
            pc = j;
            break;
          }
        }
        if (pc != cols) tb.pivot(i, pc);
      }
    }
    for (std::size_t j = n + m; j < cols; ++j) allowed[j] = false;
    for (std::size_t j = 0; j <= cols; ++j) tb.at(m, j) = 0.0;
  }

  // Phase 2 objective row: c reduced against the current basis.
  for (std::size_t j = 0; j < n; ++j) tb.at(m, j) = c[j];
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t bj = tb.basis[i];
    const double cb = bj < n ? c[bj] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= cols; ++j) tb.at(m, j) -= cb * tb.at(i, j);
  }

  if (!run_simplex(tb, allowed, pivot_cap, unbounded)) {
    out.status = LpStatus::IterationLimit;
    return out;
  }
  if (unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tb.basis[i] < n) out.x[tb.basis[i]] = tb.at(i, cols);
  out.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.objective += c[j] * out.x[j];
  out.status = LpStatus::Optimal;
  return out;
}

} // namespace lplra::lp
