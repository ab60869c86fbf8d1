#pragma once

#include "lplra/enumeration.hpp"
#include "lplra/matrix.hpp"
#include "lplra/pnorm.hpp"
#include "lplra/problem.hpp"
#include "lplra/regression.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace lplra {

enum class IsoConstruction { Qr, QrRescaled };

/// Basis b spanning span(u) with certified two-sided lp distortion:
/// |x|_p / kappa <= |b x|_p <= |x|_p for every x. The upper side is enforced
/// by rescaling a thin orthonormal basis by a provable operator-norm bound;
/// kappa is the matching provable lower-distortion bound (reported honestly
/// even when it exceeds the 2m target of the definition).
struct IsoBasis {
  Matrix b;
  double kappa = 1.0;
  IsoConstruction construction = IsoConstruction::Qr;
  std::size_t samples_checked = 0;
  std::vector<std::size_t> removed_columns; // dropped dependent input columns
};

IsoBasis isoperimetric_basis(const Matrix& u, PNormSpec p, std::size_t certify_samples = 10000,
                             std::uint64_t seed = 0x150b);

/// Re-checks the two-sided bound on fresh samples; returns the violation
/// count (zero expected).
std::size_t certify_isoperimetry(const IsoBasis& basis, PNormSpec p, std::size_t samples,
                                 std::uint64_t seed);

/// Row-sampling probabilities proportional to the p-th power of the row
/// p-norms of the well-conditioned basis of u. Finite p only.
std::vector<double> lp_leverage_scores(const Matrix& u, PNormSpec p);

/// Sampling-and-rescaling sketch: row indices + weights for u, column
/// indices + weights for v. Weights make |S Y|_p^p unbiased for |Y|_p^p.
struct SketchPair {
  std::vector<std::pair<std::size_t, double>> rows; // (row of A, weight)
  std::vector<std::pair<std::size_t, double>> cols; // (col of A, weight)
  std::uint64_t seed = 0;
  bool identity_rows = false;
  bool identity_cols = false;
};
SketchPair make_sketch(const Matrix& u, const Matrix& v, PNormSpec p, std::size_t sketch_rows,
                       std::size_t sketch_cols, std::uint64_t seed);

/// Global minimizer of |P X Q - R|_F over rank-<=k X: project R onto the
/// column space of P and row space of Q, truncate the SVD of the projected
/// core, and map back through pseudoinverses.
Matrix rank_constrained_frobenius(const Matrix& pmat, const Matrix& qmat, const Matrix& rmat,
                                  std::size_t k);

struct ReduceOutcome {
  Factorization factorization; // rank exactly k
  ApproxReport report;
  IsoBasis basis;
  bool inner_downgraded = false; // exhaustive inner search fell back to sampled
};

/// Collapses a rank-r factorization (r >= k) to rank k: isoperimetric basis
/// of u, lp refit of u*v onto it, then the subset search on the transposed
/// coefficient matrix; exhaustive inner search downgrades to sampled when
/// C(r, k) exceeds the budget.
ReduceOutcome reduce_rank(const Matrix& a, const Factorization& f, std::size_t k, PNormSpec p,
                          SubsetSearchConfig inner = {}, const RegressionConfig& cfg = {});

struct SketchedOutcome {
  Factorization factorization; // rank exactly k
  ApproxReport report;
  SketchPair sketch;
};

/// Leverage-score sketched rank reduction (finite p only): solves the rank-k
/// Frobenius problem on the row/column-sampled system. sketch_rows == 0 uses
/// ceil((k ln m)^2); a value >= the dimension degenerates to the identity
/// sketch.
SketchedOutcome sketched_reduce(const Matrix& a, const Factorization& f, std::size_t k,
                                PNormSpec p, std::size_t sketch_rows, std::uint64_t seed,
                                const RegressionConfig& cfg = {});

} // namespace lplra
