#pragma once

#include "lplra/matrix.hpp"
#include "lplra/pnorm.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lplra {

/// One low-rank approximation task: the matrix, the target rank, the norm.
struct ProblemInstance {
  Matrix a;
  std::size_t k = 1;
  PNormSpec p = PNormSpec::finite(2.0);

  ProblemInstance(Matrix a_, std::size_t k_, PNormSpec p_);
};

/// A rank-r factorization A ~ u * v. When u is a column subset of the source
/// matrix, source_columns holds the (ascending) column indices and u's j-th
/// column equals the source's source_columns[j]-th column exactly.
struct Factorization {
  Matrix u; // n x r
  Matrix v; // r x m
  std::optional<std::vector<std::size_t>> source_columns;
  std::size_t rank_budget = 0;
};

/// What an algorithm run reports back.
struct ApproxReport {
  std::string algorithm;
  double error_p = 0.0;
  double delta2 = 0.0; // rank-k Frobenius optimum from the SVD baseline
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
  std::optional<double> n_guess; // adaptive path only: the |Delta|_p guess used
};

/// |a - u*v|_p. Throws std::invalid_argument naming both shapes when the
/// factor dimensions do not conform.
double residual_norm(const Matrix& a, const Factorization& f, PNormSpec p);

} // namespace lplra
