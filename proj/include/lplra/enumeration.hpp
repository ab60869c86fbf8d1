#pragma once

#include "lplra/matrix.hpp"
#include "lplra/pnorm.hpp"
#include "lplra/problem.hpp"
#include "lplra/regression.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lplra {

struct SubsetSearchConfig {
  enum class Strategy { Exhaustive, Sampled };
  Strategy strategy = Strategy::Exhaustive;
  std::uint64_t trials = 2000; // sampled mode draw count
  std::uint64_t seed = 0;
  std::size_t exhaustive_budget = 2'000'000; // refuse above this many subsets
  RegressionConfig regression{};
};

struct SubsetSearchOutcome {
  Factorization factorization;
  ApproxReport report;
};

/// C(m, k), saturating at 2^64-1.
std::uint64_t binomial(std::size_t m, std::size_t k);

/// The k-subset of [0, m) at lexicographic rank `rank`.
std::vector<std::size_t> subset_at_rank(std::size_t m, std::size_t k, std::uint64_t rank);

/// Best k-column subset of a under the entrywise p norm. Exhaustive mode
/// scans every subset in lexicographic order (refusing when C(m,k) exceeds
/// the budget); sampled mode draws cfg.trials subsets, one child seed per
/// trial. Ties within 1e-12 relative go to the lexicographically smallest
/// subset. Subset evaluations run on the OpenMP workers; the argmin reduction
/// happens serially in index order, so results do not depend on scheduling.
SubsetSearchOutcome best_subset(const Matrix& a, std::size_t k, PNormSpec p,
                                const SubsetSearchConfig& cfg = {});

/// |a - a_s * V|_p for the single subset s (distinct, in-range indices).
double subset_error(const Matrix& a, std::span<const std::size_t> s, PNormSpec p,
                    const RegressionConfig& cfg = {});

} // namespace lplra
