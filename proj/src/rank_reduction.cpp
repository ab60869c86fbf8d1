#include "lplra/rank_reduction.hpp"

#include "lplra/errors.hpp"
#include "lplra/linalg.hpp"
#include "lplra/rng.hpp"
#include "lplra/svd.hpp"
#include "lplra/threading.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lplra {

namespace {

// Schur-test operator norm bound for M acting lp -> lp:
// (max row l1)^(1-1/p) * (max col l1)^(1/p); exact row/col sums for the
// endpoints p = 1 and p = inf.
double schur_bound(const Matrix& m, PNormSpec p) {
  double max_row = 0.0, max_col = 0.0;
  std::vector<double> colsum(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double rs = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double v = std::fabs(m(i, j));
      rs += v;
      colsum[j] += v;
    }
    max_row = std::max(max_row, rs);
  }
  for (double c : colsum) max_col = std::max(max_col, c);
  const double inv_p = p.is_infinity() ? 0.0 : 1.0 / p.exponent();
  return std::pow(max_row, 1.0 - inv_p) * std::pow(max_col, inv_p);
}

// |Qx|_p <= bound * |x|_p via the l2 isometry of an orthonormal Q:
// |Qx|_p <= n^max(0,1/p-1/2) |Qx|_2 = ... <= r^max(0,1/2-1/p) |x|_p factors.
double cross_norm_upper(std::size_t n, std::size_t r, PNormSpec p) {
  const double inv_p = p.is_infinity() ? 0.0 : 1.0 / p.exponent();
  return std::pow(static_cast<double>(n), std::max(0.0, inv_p - 0.5)) *
         std::pow(static_cast<double>(r), std::max(0.0, 0.5 - inv_p));
}

double cross_norm_lower_distortion(std::size_t n, std::size_t r, PNormSpec p) {
  const double inv_p = p.is_infinity() ? 0.0 : 1.0 / p.exponent();
  return std::pow(static_cast<double>(n), std::max(0.0, 0.5 - inv_p)) *
         std::pow(static_cast<double>(r), std::max(0.0, inv_p - 0.5));
}

// random unit-lp vector: Dirichlet magnitudes (exponential draws normalized)
// raised to 1/p, signs symmetric; uniform-scaled for p = infinity
std::vector<double> random_unit_lp(std::size_t r, PNormSpec p, Rng& rng) {
  std::vector<double> x(r);
  if (p.is_infinity()) {
    double mx = 0.0;
    for (double& v : x) {
      v = rng.uniform(-1.0, 1.0);
      mx = std::max(mx, std::fabs(v));
    }
    if (mx == 0.0) {
      x[0] = 1.0;
      return x;
    }
    for (double& v : x) v /= mx;
    return x;
  }
  double total = 0.0;
  std::vector<double> e(r);
  for (std::size_t i = 0; i < r; ++i) {
    e[i] = rng.exponential();
    total += e[i];
  }
  const double pe = p.exponent();
  for (std::size_t i = 0; i < r; ++i) {
    const double mag = std::pow(e[i] / total, 1.0 / pe);
    x[i] = rng.coin() ? mag : -mag;
  }
  return x;
}

// certification sample roster: canonical vectors, +-1 sign patterns, then
// random unit-lp draws up to `count`
std::size_t certify_violations(const Matrix& b, double kappa, PNormSpec p, std::size_t count,
                               std::uint64_t seed) {
  const std::size_t r = b.cols();
  std::vector<std::vector<double>> samples;
  samples.reserve(count);
  for (std::size_t i = 0; i < r && samples.size() < count; ++i) {
    std::vector<double> e(r, 0.0);
    e[i] = 1.0;
    samples.push_back(std::move(e));
  }
  {
    Rng rng(Rng::mix(seed, 0x516e));
    const double scale = p.is_infinity() ? 1.0 : std::pow(static_cast<double>(r),
                                                          -1.0 / p.exponent());
    for (std::size_t t = 0; t < 100 && samples.size() < count; ++t) {
      std::vector<double> s(r);
      for (double& v : s) v = rng.coin() ? scale : -scale;
      samples.push_back(std::move(s));
    }
  }
  {
    Rng rng(Rng::mix(seed, 0xd1ce));
    while (samples.size() < count) samples.push_back(random_unit_lp(r, p, rng));
  }

  std::size_t violations = 0;
#pragma omp parallel for schedule(static) num_threads(max_threads()) reduction(+ : violations)
  for (long long t = 0; t < static_cast<long long>(samples.size()); ++t) {
    const auto& x = samples[static_cast<std::size_t>(t)];
    const double xn = vector_norm(x, p);
    const double bn = vector_norm(linalg::apply(b, x), p);
    if (bn > xn * (1.0 + 1e-9) || bn < xn / kappa) violations += 1;
  }
  return violations;
}

} // namespace

IsoBasis isoperimetric_basis(const Matrix& u, PNormSpec p, std::size_t certify_samples,
                             std::uint64_t seed) {
  if (u.empty()) throw std::invalid_argument("isoperimetric_basis: empty input");
  linalg::PivotedQr qr = linalg::pivoted_qr(u, 1e-9);

  IsoBasis out;
  for (std::size_t t = qr.rank; t < u.cols(); ++t) out.removed_columns.push_back(qr.perm[t]);
  std::sort(out.removed_columns.begin(), out.removed_columns.end());

  const std::size_t n = u.rows(), r = qr.rank;
  if (r == 0) throw std::invalid_argument("isoperimetric_basis: zero input");

  // upper operator-norm bound: best of the Schur test and the l2 cross-norm
  // chain (the l2 chain is exact at p = 2, the Schur test is exact at the
  // endpoints and tight for sparse bases)
  double scale = 1.0;
  if (p != PNormSpec::finite(2.0)) {
    scale = std::min(schur_bound(qr.q, p), cross_norm_upper(n, r, p));
    scale = std::max(scale, 1e-300);
  }

  Matrix b = qr.q;
  if (scale != 1.0) {
    for (double& x : b.data()) x /= scale;
  }

  // matching provable lower bound: |B x|_p >= |x|_p / kappa with
  // kappa = scale * min(schur(Q^T), l2 cross-norm chain), padded for rounding
  double lower = 1.0;
  if (p != PNormSpec::finite(2.0)) {
    lower = std::min(schur_bound(qr.q.transposed(), p), cross_norm_lower_distortion(n, r, p));
  }
  out.kappa = scale * lower * (1.0 + 1e-9);
  out.construction = scale == 1.0 ? IsoConstruction::Qr : IsoConstruction::QrRescaled;
  out.b = std::move(b);
  out.samples_checked = certify_samples;

  if (certify_violations(out.b, out.kappa, p, certify_samples, seed) != 0) {
    std::ostringstream msg;
    msg << "isoperimetric_basis: certification failed at kappa = " << out.kappa;
    throw std::runtime_error(msg.str());
  }
  return out;
}

std::size_t certify_isoperimetry(const IsoBasis& basis, PNormSpec p, std::size_t samples,
                                 std::uint64_t seed) {
  return certify_violations(basis.b, basis.kappa, p, samples, seed);
}

std::vector<double> lp_leverage_scores(const Matrix& u, PNormSpec p) {
  if (p.is_infinity()) {
    throw std::invalid_argument("lp_leverage_scores: finite p only");
  }
  linalg::PivotedQr qr = linalg::pivoted_qr(u, 1e-9);
  if (qr.rank < u.cols()) {
    throw std::invalid_argument("lp_leverage_scores: input must have full column rank");
  }
  // same well-conditioned construction as the isoperimetric basis; the global
  // rescale cancels in the normalization
  const double pe = p.exponent();
  std::vector<double> scores(u.rows(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < u.rows(); ++i) {
    const double rn = vector_norm(qr.q.row_span(i), p);
    scores[i] = std::pow(rn, pe);
    total += scores[i];
  }
  if (total <= 0.0) throw std::invalid_argument("lp_leverage_scores: zero basis");
  for (double& s : scores) s /= total;
  return scores;
}

SketchPair make_sketch(const Matrix& u, const Matrix& v, PNormSpec p, std::size_t sketch_rows,
                       std::size_t sketch_cols, std::uint64_t seed) {
  SketchPair out;
  out.seed = seed;
  const double pe = p.exponent();

  auto draw = [&](const std::vector<double>& probs, std::size_t count, std::uint64_t subseed) {
    std::vector<std::pair<std::size_t, double>> picks(count);
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      cdf[i] = acc;
    }
    Rng rng(subseed);
    for (std::size_t t = 0; t < count; ++t) {
      const double x = rng.uniform01() * acc;
      std::size_t idx =
          std::min(static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), x) -
                                            cdf.begin()),
                   probs.size() - 1);
      while (probs[idx] <= 0.0 && idx + 1 < probs.size()) ++idx;
      const double w = std::pow(1.0 / (static_cast<double>(count) * probs[idx]), 1.0 / pe);
      picks[t] = {idx, w};
    }
    return picks;
  };

  if (sketch_rows >= u.rows()) {
    out.identity_rows = true;
    for (std::size_t i = 0; i < u.rows(); ++i) out.rows.push_back({i, 1.0});
  } else {
    out.rows = draw(lp_leverage_scores(u, p), sketch_rows, Rng::mix(seed, 0x5a));
  }
  if (sketch_cols >= v.cols()) {
    out.identity_cols = true;
    for (std::size_t j = 0; j < v.cols(); ++j) out.cols.push_back({j, 1.0});
  } else {
    out.cols = draw(lp_leverage_scores(v.transposed(), p), sketch_cols, Rng::mix(seed, 0x7b));
  }
  return out;
}

Matrix rank_constrained_frobenius(const Matrix& pmat, const Matrix& qmat, const Matrix& rmat,
                                  std::size_t k) {
  if (pmat.rows() != rmat.rows() || qmat.cols() != rmat.cols()) {
    throw std::invalid_argument("rank_constrained_frobenius: shapes do not conform");
  }
  const std::size_t rp = pmat.cols(), rq = qmat.rows();

  linalg::PivotedQr qr_p = linalg::pivoted_qr(pmat, 1e-12);
  linalg::PivotedQr qr_q = linalg::pivoted_qr(qmat.transposed(), 1e-12);
  const Matrix& qp = qr_p.q; // rows(R) x rank_p
  const Matrix& qq = qr_q.q; // cols(R) x rank_q

  // core = Qp^T R Qq, truncated to rank k
  Matrix core = multiply(multiply(qp.transposed(), rmat), qq);
  const std::size_t kk = std::min({k, core.rows(), core.cols()});
  Matrix truncated(core.rows(), core.cols());
  if (kk > 0) {
    auto [svd, f] = truncated_svd(core, kk);
    (void)svd;
    truncated = multiply(f.u, f.v);
  }

  // X = P^+ (Qp truncated Qq^T) Q^+ via SVD pseudoinverses
  auto pinv_apply_left = [](const Matrix& mat, const Matrix& rhs) {
    // returns pinv(mat) * rhs
    SvdResult s = jacobi_svd(mat);
    const double cutoff =
        1e-12 * (s.singular_values.empty() ? 0.0 : s.singular_values.front());
    Matrix ut_rhs = multiply(s.u.transposed(), rhs);
    for (std::size_t i = 0; i < s.singular_values.size(); ++i) {
      const double sv = s.singular_values[i];
      const double inv = sv > cutoff ? 1.0 / sv : 0.0;
      for (std::size_t j = 0; j < ut_rhs.cols(); ++j) ut_rhs(i, j) *= inv;
    }
    return multiply(s.vt.transposed(), ut_rhs);
  };

  const Matrix mid = multiply(multiply(qp, truncated), qq.transposed());
  const Matrix left = pinv_apply_left(pmat, mid); // rp x cols(R)
  // right multiply by pinv(Q): X = left * pinv(Q) = (pinv(Q^T) * left^T)^T
  const Matrix x = pinv_apply_left(qmat.transposed(), left.transposed()).transposed();
  if (x.rows() != rp || x.cols() != rq) {
    throw std::logic_error("rank_constrained_frobenius: internal shape error");
  }
  return x;
}

ReduceOutcome reduce_rank(const Matrix& a, const Factorization& f, std::size_t k, PNormSpec p,
                          SubsetSearchConfig inner, const RegressionConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  if (f.u.cols() < k) throw std::invalid_argument("reduce_rank: factor rank below target k");

  ReduceOutcome out;
  out.basis = isoperimetric_basis(f.u, p);
  const Matrix& w0 = out.basis.b;

  const Matrix uv = multiply(f.u, f.v);
  MultiRegressionResult z0fit = solve_multi_regression(w0, uv, p, cfg);
  const Matrix z0t = z0fit.v.transposed(); // m x r'

  if (z0t.cols() < k) throw std::invalid_argument("reduce_rank: basis rank fell below k");

  if (inner.strategy == SubsetSearchConfig::Strategy::Exhaustive &&
      binomial(z0t.cols(), k) > inner.exhaustive_budget) {
    inner.strategy = SubsetSearchConfig::Strategy::Sampled;
    out.inner_downgraded = true;
  }
  inner.regression = cfg;
  SubsetSearchOutcome sub = best_subset(z0t, k, p, inner);

  // Z = X^T, W = W0 Y^T for the inner factorization (X, Y)
  Factorization reduced;
  reduced.u = multiply(w0, sub.factorization.v.transposed());
  reduced.v = sub.factorization.u.transposed();
  reduced.rank_budget = k;

  out.report.algorithm = out.inner_downgraded ? "reduce(sampled-inner)" : "reduce";
  out.report.error_p = residual_norm(a, reduced, p);
  out.report.delta2 = estimate_delta2(a, k);
  out.report.seed = inner.seed;
  out.report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.factorization = std::move(reduced);
  return out;
}

SketchedOutcome sketched_reduce(const Matrix& a, const Factorization& f, std::size_t k,
                                PNormSpec p, std::size_t sketch_rows, std::uint64_t seed,
                                const RegressionConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  if (p.is_infinity()) {
    throw RefusalError("sketched_reduce: p = infinity is out of scope; use reduce_rank");
  }
  if (f.u.cols() < k) throw std::invalid_argument("sketched_reduce: factor rank below target k");
  (void)cfg;

  const std::size_t n = a.rows(), m = a.cols();
  std::size_t target = sketch_rows;
  if (target == 0) {
    const double klogm = static_cast<double>(k) * std::log(static_cast<double>(std::max<std::size_t>(m, 2)));
    target = static_cast<std::size_t>(std::ceil(klogm * klogm));
  }
  const std::size_t srows = std::min(target, n);
  const std::size_t scols = std::min(target, m);

  SketchPair sk = make_sketch(f.u, f.v, p, srows, scols, seed);

  // S U, V T, S A T
  Matrix su(sk.rows.size(), f.u.cols());
  for (std::size_t t = 0; t < sk.rows.size(); ++t) {
    const auto [i, w] = sk.rows[t];
    for (std::size_t j = 0; j < f.u.cols(); ++j) su(t, j) = w * f.u(i, j);
  }
  Matrix vt(f.v.rows(), sk.cols.size());
  for (std::size_t t = 0; t < sk.cols.size(); ++t) {
    const auto [j, w] = sk.cols[t];
    for (std::size_t i = 0; i < f.v.rows(); ++i) vt(i, t) = w * f.v(i, j);
  }
  Matrix sat(sk.rows.size(), sk.cols.size());
  for (std::size_t t = 0; t < sk.rows.size(); ++t) {
    const auto [i, wr] = sk.rows[t];
    for (std::size_t s = 0; s < sk.cols.size(); ++s) {
      const auto [j, wc] = sk.cols[s];
      sat(t, s) = wr * wc * a(i, j);
    }
  }

  const Matrix x = rank_constrained_frobenius(su, vt, sat, k);

  // split X into rank-k factors through its SVD
  auto [xsvd, xf] = truncated_svd(x, std::min(k, std::min(x.rows(), x.cols())));
  (void)xsvd;

  Factorization reduced;
  reduced.u = multiply(f.u, xf.u);
  reduced.v = multiply(xf.v, f.v);
  reduced.rank_budget = k;

  SketchedOutcome out;
  out.sketch = std::move(sk);
  out.report.algorithm = "sketched";
  out.report.error_p = residual_norm(a, reduced, p);
  out.report.delta2 = estimate_delta2(a, k);
  out.report.seed = seed;
  out.report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.factorization = std::move(reduced);
  return out;
}

} // namespace lplra
