#include "lplra/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lplra::linalg {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

std::vector<double> apply(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw std::invalid_argument("apply: length mismatch");
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row_span(i), x);
  return out;
}

std::vector<double> apply_transposed(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.rows()) throw std::invalid_argument("apply_transposed: length mismatch");
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row_span(i);
    const double xi = x[i];
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += xi * row[j];
  }
  return out;
}

PivotedQr pivoted_qr(const Matrix& a, double rel_tol) {
  if (a.empty()) throw std::invalid_argument("pivoted_qr: empty matrix");
  const std::size_t n = a.rows(), c = a.cols();

  // Keep explicit v vectors; clearer than packing and cheap at our scales.
  Matrix work = a;
  std::vector<std::size_t> perm(c);
  for (std::size_t j = 0; j < c; ++j) perm[j] = j;
  std::vector<std::vector<double>> vs;
  std::vector<double> betas;
  std::vector<double> colsq(c, 0.0);
  for (std::size_t j = 0; j < c; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += work(i, j) * work(i, j);
    colsq[j] = s;
  }

  const std::size_t steps = std::min(n, c);
  double first_pivot = 0.0;
  std::size_t rank = 0;
  for (std::size_t jcol = 0; jcol < steps; ++jcol) {
    std::size_t best = jcol;
    for (std::size_t j = jcol + 1; j < c; ++j)
      if (colsq[j] > colsq[best]) best = j;
    if (best != jcol) {
      for (std::size_t i = 0; i < n; ++i) std::swap(work(i, jcol), work(i, best));
      std::swap(colsq[jcol], colsq[best]);
      std::swap(perm[jcol], perm[best]);
    }

    double sigma2 = 0.0;
    for (std::size_t i = jcol; i < n; ++i) sigma2 += work(i, jcol) * work(i, jcol);
    const double sigma = std::sqrt(sigma2);
    if (jcol == 0) first_pivot = sigma;
    if (sigma <= rel_tol * std::max(first_pivot, 1e-300)) break;
    rank = jcol + 1;

    const double x0 = work(jcol, jcol);
    const double alpha = x0 >= 0.0 ? -sigma : sigma;
    std::vector<double> v(n, 0.0);
    v[jcol] = x0 - alpha;
    for (std::size_t i = jcol + 1; i < n; ++i) v[i] = work(i, jcol);
    double vnorm2 = 0.0;
    for (std::size_t i = jcol; i < n; ++i) vnorm2 += v[i] * v[i];
    const double b = vnorm2 > 0.0 ? 2.0 / vnorm2 : 0.0;

    for (std::size_t j = jcol; j < c; ++j) {
      double s = 0.0;
      for (std::size_t i = jcol; i < n; ++i) s += v[i] * work(i, j);
      s *= b;
      for (std::size_t i = jcol; i < n; ++i) work(i, j) -= s * v[i];
    }
    for (std::size_t j = jcol + 1; j < c; ++j) {
      colsq[j] -= work(jcol, j) * work(jcol, j);
      if (colsq[j] < 0.0) colsq[j] = 0.0;
    }
    vs.push_back(std::move(v));
    betas.push_back(b);
  }

  // Q: apply the reflectors to the first `rank` identity columns.
  Matrix q(n, rank);
  for (std::size_t col = 0; col < rank; ++col) {
    std::vector<double> e(n, 0.0);
    e[col] = 1.0;
    for (std::size_t j = rank; j-- > 0;) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += vs[j][i] * e[i];
      s *= betas[j];
      for (std::size_t i = 0; i < n; ++i) e[i] -= s * vs[j][i];
    }
    q.set_column(col, e);
  }

  Matrix r(rank, c);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = i; j < c; ++j) r(i, j) = work(i, j);

  // normalize to a nonnegative R diagonal
  for (std::size_t j = 0; j < rank; ++j) {
    if (r(j, j) < 0.0) {
      for (std::size_t t = j; t < c; ++t) r(j, t) = -r(j, t);
      for (std::size_t i = 0; i < n; ++i) q(i, j) = -q(i, j);
    }
  }

  return {std::move(q), std::move(r), std::move(perm), rank};
}

std::vector<double> least_squares(const Matrix& a, std::span<const double> b, double rel_tol) {
  if (b.size() != a.rows()) throw std::invalid_argument("least_squares: length mismatch");
  PivotedQr f = pivoted_qr(a, rel_tol);
  // y_perm solves R[0:rank,0:rank] y = Q^T b on the pivoted coordinates.
  std::vector<double> qtb(f.rank, 0.0);
  for (std::size_t j = 0; j < f.rank; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += f.q(i, j) * b[i];
    qtb[j] = s;
  }
  std::vector<double> y(a.cols(), 0.0);
  for (std::size_t i = f.rank; i-- > 0;) {
    double s = qtb[i];
    for (std::size_t j = i + 1; j < f.rank; ++j) s -= f.r(i, j) * y[f.perm[j]];
    y[f.perm[i]] = s / f.r(i, i);
  }
  return y;
}

std::vector<double> weighted_ridge_ls(const Matrix& a, std::span<const double> w,
                                      std::span<const double> b, double ridge_rel) {
  const std::size_t n = a.rows(), c = a.cols();
  if (w.size() != n || b.size() != n) throw std::invalid_argument("weighted_ridge_ls: sizes");

  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = a.row_span(i);
    trace += w[i] * dot(row, row);
  }
  const double ridge = std::sqrt(std::max(ridge_rel * trace, 1e-300));

  Matrix stacked(n + c, c);
  std::vector<double> rhs(n + c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double sw = std::sqrt(w[i]);
    for (std::size_t j = 0; j < c; ++j) stacked(i, j) = sw * a(i, j);
    rhs[i] = sw * b[i];
  }
  for (std::size_t j = 0; j < c; ++j) stacked(n + j, j) = ridge;
  return least_squares(stacked, rhs);
}

std::vector<double> projection_residual(const Matrix& q, std::span<const double> b) {
  if (b.size() != q.rows()) throw std::invalid_argument("projection_residual: length mismatch");
  std::vector<double> res(b.begin(), b.end());
  for (std::size_t j = 0; j < q.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.rows(); ++i) s += q(i, j) * b[i];
    for (std::size_t i = 0; i < q.rows(); ++i) res[i] -= s * q(i, j);
  }
  return res;
}

double determinant(Matrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: not square");
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::fabs(a(i, col)) > std::fabs(a(piv, col))) piv = i;
    if (a(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a(i, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

std::vector<double> solve_dense(Matrix a, std::vector<double> b) {
  if (a.rows() != a.cols() || b.size() != a.rows())
    throw std::invalid_argument("solve_dense: shape mismatch");
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::fabs(a(i, col)) > std::fabs(a(piv, col))) piv = i;
    if (a(piv, col) == 0.0) throw std::runtime_error("solve_dense: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a(i, col) / a(col, col);
      b[i] -= f * b[col];
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * b[j];
    b[i] = s / a(i, i);
  }
  return b;
}

} // namespace lplra::linalg
