#pragma once

#include "lplra/matrix.hpp"

#include <span>
#include <vector>

namespace lplra::linalg {

/// Householder QR with column pivoting. q has `rank` orthonormal columns
/// spanning the column space of a at the given relative tolerance; perm lists
/// the source columns in pivot order (independent columns first).
struct PivotedQr {
  Matrix q;                      // n x rank
  Matrix r;                      // rank x cols (of the permuted matrix)
  std::vector<std::size_t> perm; // length cols
  std::size_t rank = 0;
};
PivotedQr pivoted_qr(const Matrix& a, double rel_tol = 1e-12);

/// Least-squares min |a*y - b|_2 via pivoted QR; rank-revealing, returns the
/// basic solution with zeros on the dependent coordinates.
std::vector<double> least_squares(const Matrix& a, std::span<const double> b,
                                  double rel_tol = 1e-12);

/// Weighted ridge least squares: min sum_i w_i (a_i . y - b_i)^2 + ridge|y|^2
/// with ridge = ridge_rel * trace(A^T W A). Solved by QR on the stacked
/// weighted system; deterministic for rank-deficient a.
std::vector<double> weighted_ridge_ls(const Matrix& a, std::span<const double> w,
                                      std::span<const double> b, double ridge_rel = 1e-12);

/// Orthogonal projection residual b - Q Q^T b for Q with orthonormal columns.
std::vector<double> projection_residual(const Matrix& q, std::span<const double> b);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

/// In-place LU determinant of a small square matrix.
double determinant(Matrix a);

/// Solve a small square system a*x = b by partial-pivot LU.
std::vector<double> solve_dense(Matrix a, std::vector<double> b);

std::vector<double> apply(const Matrix& a, std::span<const double> x);            // a*x
std::vector<double> apply_transposed(const Matrix& a, std::span<const double> x); // a^T*x

} // namespace lplra::linalg
