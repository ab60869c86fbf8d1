#pragma once

#include "lplra/matrix.hpp"
#include "lplra/pnorm.hpp"
#include "lplra/problem.hpp"

#include <vector>

namespace lplra {

struct SvdResult {
  Matrix u;                           // n x r, orthonormal columns
  std::vector<double> singular_values; // nonincreasing
  Matrix vt;                          // r x m, orthonormal rows
  bool converged = true;
  int sweeps = 0;
};

/// One-sided Jacobi SVD: cyclic sweeps, off-diagonal tolerance 1e-12,
/// sweep cap 60. Left singular vectors follow the sign convention that the
/// largest-magnitude entry is nonnegative.
SvdResult jacobi_svd(const Matrix& a);

/// Rank-k truncation plus the matching factorization (u_k diag(sigma), v_k^T).
std::pair<SvdResult, Factorization> truncated_svd(const Matrix& a, std::size_t k);

/// |a - svd_k(a)|_p for the requested entrywise norm.
double baseline_error(const Matrix& a, std::size_t k, PNormSpec p);

/// sqrt(sum of squared singular values beyond the first k): the rank-k
/// Frobenius optimum, used as the |Delta|_2 anchor.
double estimate_delta2(const Matrix& a, std::size_t k);

} // namespace lplra
