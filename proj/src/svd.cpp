#include "lplra/svd.hpp"

#include "lplra/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lplra {

namespace {

constexpr double kOrthTol = 1e-12;
constexpr int kSweepCap = 60;

// One-sided Jacobi on a tall matrix (rows >= cols): rotate column pairs of W
// until all pairs are orthogonal; accumulate the rotations in V.
struct OneSided {
  Matrix w; // n x m, columns become sigma_j * u_j
  Matrix v; // m x m
  bool converged = false;
  int sweeps = 0;
};

OneSided one_sided_jacobi(Matrix w) {
  const std::size_t n = w.rows(), m = w.cols();
  Matrix v = Matrix::identity(m);
  bool converged = false;
  int sweep = 0;
  for (; sweep < kSweepCap; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        double aii = 0.0, ajj = 0.0, aij = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const double wi = w(t, i), wj = w(t, j);
          aii += wi * wi;
          ajj += wj * wj;
          aij += wi * wj;
        }
        if (std::fabs(aij) <= kOrthTol * std::sqrt(aii * ajj) || aij == 0.0) continue;
        rotated = true;
        const double zeta = (ajj - aii) / (2.0 * aij);
        const double t_rot =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t_rot * t_rot);
        const double sn = cs * t_rot;
        for (std::size_t t = 0; t < n; ++t) {
          const double wi = w(t, i), wj = w(t, j);
          w(t, i) = cs * wi - sn * wj;
          w(t, j) = sn * wi + cs * wj;
        }
        for (std::size_t t = 0; t < m; ++t) {
          const double vi = v(t, i), vj = v(t, j);
          v(t, i) = cs * vi - sn * vj;
          v(t, j) = sn * vi + cs * vj;
        }
      }
    }
    if (!rotated) {
      converged = true;
      break;
    }
  }
  return {std::move(w), std::move(v), converged, sweep};
}

// Orthonormal fill-in for numerically zero singular directions so that u
// always has orthonormal columns.
void complete_column(Matrix& u, std::size_t col) {
  const std::size_t n = u.rows();
  for (std::size_t cand = 0; cand < n; ++cand) {
    std::vector<double> e(n, 0.0);
    e[cand] = 1.0;
    for (std::size_t j = 0; j < u.cols(); ++j) {
      if (j == col) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += u(i, j) * e[i];
      for (std::size_t i = 0; i < n; ++i) e[i] -= s * u(i, j);
    }
    const double nn = linalg::norm2(e);
    if (nn > 1e-6) {
      for (std::size_t i = 0; i < n; ++i) u(i, col) = e[i] / nn;
      return;
    }
  }
}

} // namespace

SvdResult jacobi_svd(const Matrix& a) {
  if (a.empty()) throw std::invalid_argument("jacobi_svd: empty matrix");
  const bool flip = a.rows() < a.cols(); // decompose the taller orientation
  const Matrix work = flip ? a.transposed() : a;
  const std::size_t n = work.rows(), m = work.cols();

  OneSided os = one_sided_jacobi(work);

  std::vector<double> sigma(m, 0.0);
  Matrix u(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += os.w(i, j) * os.w(i, j);
    sigma[j] = std::sqrt(s);
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Matrix v_sorted(m, m);
  std::vector<double> sig_sorted(m);
  const double smax = sigma.empty() ? 0.0 : sigma[order[0]];
  for (std::size_t jj = 0; jj < m; ++jj) {
    const std::size_t j = order[jj];
    sig_sorted[jj] = sigma[j];
    if (sigma[j] > 1e-300 && sigma[j] > 1e-15 * smax) {
      for (std::size_t i = 0; i < n; ++i) u(i, jj) = os.w(i, j) / sigma[j];
    }
    for (std::size_t i = 0; i < m; ++i) v_sorted(i, jj) = os.v(i, j);
  }
  for (std::size_t jj = 0; jj < m; ++jj) {
    bool zero = true;
    for (std::size_t i = 0; i < n && zero; ++i) zero = u(i, jj) == 0.0;
    if (zero) complete_column(u, jj);
  }

  // sign convention: largest-magnitude entry of each left vector nonnegative
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::fabs(u(i, j)) > std::fabs(u(arg, j))) arg = i;
    if (u(arg, j) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) u(i, j) = -u(i, j);
      for (std::size_t i = 0; i < m; ++i) v_sorted(i, j) = -v_sorted(i, j);
    }
  }

  SvdResult out;
  out.converged = os.converged;
  out.sweeps = os.sweeps;
  out.singular_values = std::move(sig_sorted);
  if (!flip) {
    out.u = std::move(u);
    out.vt = v_sorted.transposed();
  } else {
    // a = (work)^T = (u sigma v^T)^T = v sigma u^T
    out.u = std::move(v_sorted);
    out.vt = u.transposed();
    // re-apply the sign convention on the new left factor
    const std::size_t rn = out.u.rows(), rm = out.u.cols();
    for (std::size_t j = 0; j < rm; ++j) {
      std::size_t arg = 0;
      for (std::size_t i = 1; i < rn; ++i)
        if (std::fabs(out.u(i, j)) > std::fabs(out.u(arg, j))) arg = i;
      if (out.u(arg, j) < 0.0) {
        for (std::size_t i = 0; i < rn; ++i) out.u(i, j) = -out.u(i, j);
        for (std::size_t i = 0; i < out.vt.cols(); ++i) out.vt(j, i) = -out.vt(j, i);
      }
    }
  }
  return out;
}

std::pair<SvdResult, Factorization> truncated_svd(const Matrix& a, std::size_t k) {
  if (k == 0 || k > std::min(a.rows(), a.cols())) {
    throw std::invalid_argument("truncated_svd: k must be in [1, min(n, m)]");
  }
  SvdResult full = jacobi_svd(a);

  SvdResult trunc;
  trunc.converged = full.converged;
  trunc.sweeps = full.sweeps;
  trunc.singular_values.assign(full.singular_values.begin(), full.singular_values.begin() + k);
  trunc.u = Matrix(a.rows(), k);
  trunc.vt = Matrix(k, a.cols());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) trunc.u(i, j) = full.u(i, j);
    for (std::size_t i = 0; i < a.cols(); ++i) trunc.vt(j, i) = full.vt(j, i);
  }

  Factorization f;
  f.u = Matrix(a.rows(), k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) f.u(i, j) = trunc.u(i, j) * trunc.singular_values[j];
  f.v = trunc.vt;
  f.rank_budget = k;
  return {std::move(trunc), std::move(f)};
}

double baseline_error(const Matrix& a, std::size_t k, PNormSpec p) {
  auto [svd, f] = truncated_svd(a, k);
  (void)svd;
  return residual_norm(a, f, p);
}

double estimate_delta2(const Matrix& a, std::size_t k) {
  if (k > std::min(a.rows(), a.cols())) throw std::invalid_argument("estimate_delta2: k too large");
  SvdResult full = jacobi_svd(a);
  double s = 0.0;
  for (std::size_t i = k; i < full.singular_values.size(); ++i) {
    s += full.singular_values[i] * full.singular_values[i];
  }
  return std::sqrt(s);
}

} // namespace lplra
