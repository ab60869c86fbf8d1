#pragma once

#include "lplra/matrix.hpp"
#include "lplra/pnorm.hpp"
#include "lplra/problem.hpp"

#include <cstdint>
#include <vector>

namespace lplra {

/// Synthetic instance a = a_star + delta with known rank-k ground truth and
/// known per-column perturbation norms; the reference object the
/// approximation-bound tests are checked against.
struct PlantedInstance {
  Matrix a_star; // rank <= k
  Matrix delta;
  Matrix a; // a_star + delta, exactly
  std::size_t k = 1;
  PNormSpec p = PNormSpec::finite(2.0);
  double delta_norm = 0.0;              // |delta|_p
  std::vector<double> per_column_delta; // |delta_i|_p, all positive
  Matrix left_factor;                   // a_star = left_factor * right_factor
  Matrix right_factor;
};

/// Each entry shifted by an independent uniform draw in [-gamma, gamma].
Matrix perturb(const Matrix& a, double gamma, std::uint64_t seed);

/// a_star = (n x k uniform[-1,1]) * (k x m uniform[-1,1]); delta uniform in
/// [-delta_scale, delta_scale] plus a tiny perturbation so every column of
/// delta has positive norm.
PlantedInstance make_planted(std::size_t n, std::size_t m, std::size_t k, PNormSpec p,
                             double delta_scale, std::uint64_t seed);

/// Max-|determinant| column selection on the normalized ground truth: scale
/// column i of a_star by 1/|delta_i|_p, factor through rank k, and pick the
/// k columns of the right factor whose submatrix maximizes |det|
/// (lexicographic tie-break). Test oracle; refuses when C(m,k) exceeds the
/// budget.
std::vector<std::size_t> max_determinant_select(const PlantedInstance& inst,
                                           std::uint64_t budget = 2'000'000);

/// Cramer coefficients of column i against the selected subset; the selection
/// above guarantees every |coefficient| <= 1.
std::vector<double> reconstruction_coefficients(const PlantedInstance& inst,
                                                const std::vector<std::size_t>& subset,
                                                std::size_t column);

/// The explicit factorization certified by the selection: u = a's subset
/// columns, v_i = |delta_i|_p * (M_i(j) / |delta_{s_j}|_p)_j. Its per-column
/// error is at most (k+1)|delta_i|_p.
Factorization certificate_factorization(const PlantedInstance& inst,
                                        const std::vector<std::size_t>& subset);

/// Alternating minimization from random starts plus every column-subset
/// start; an upper bound on opt_{k,p} for tiny instances.
double brute_force_opt(const Matrix& a, std::size_t k, PNormSpec p, int restarts,
                       std::uint64_t seed);

/// a = (k+1) I_{k+1}; witness_b = (k+1) I - ones, rank <= k; any k columns of
/// a leave an l_inf column-subset cost of exactly k+1.
struct LowerBoundInstance {
  Matrix a;
  double expected_css_cost = 0.0;
  Matrix witness_b;
};
LowerBoundInstance lower_bound_instance(std::size_t k);

} // namespace lplra
