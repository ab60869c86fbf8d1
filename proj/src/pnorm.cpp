#include "lplra/pnorm.hpp"

#include "lplra/threading.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace lplra {

PNormSpec PNormSpec::finite(double p) {
  if (!std::isfinite(p) || p < 1.0) {
    throw std::invalid_argument("PNormSpec: finite exponent must satisfy p >= 1");
  }
  return PNormSpec(p, false);
}

PNormSpec PNormSpec::infinity() { return PNormSpec(0.0, true); }

PNormSpec PNormSpec::parse(std::string_view text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") return infinity();
  char* end = nullptr;
  std::string buf(text);
  double p = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str() || *end != '\0') {
    throw std::invalid_argument("PNormSpec: cannot parse '" + buf + "'");
  }
  return finite(p);
}

double PNormSpec::exponent() const {
  if (infinite_) throw std::logic_error("PNormSpec: infinity has no finite exponent");
  return p_;
}

std::string PNormSpec::to_string() const {
  if (infinite_) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", p_);
  return buf;
}

namespace {

constexpr std::size_t kNormBlock = 4096;

double max_abs_span(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// sum of (|x|/scale)^p over one block, serial
double block_power_sum(std::span<const double> v, double scale, double p) {
  double s = 0.0;
  for (double x : v) {
    const double r = std::fabs(x) / scale;
    if (r > 0.0) s += std::pow(r, p);
  }
  return s;
}

} // namespace

double vector_norm(std::span<const double> v, PNormSpec p) {
  const double m = max_abs_span(v);
  if (m == 0.0) return 0.0;
  if (p.is_infinity()) return m;
  return m * std::pow(block_power_sum(v, m, p.exponent()), 1.0 / p.exponent());
}

double entrywise_norm(const Matrix& mat, PNormSpec p) {
  if (mat.empty()) throw std::invalid_argument("entrywise_norm: empty matrix");
  const std::span<const double> v{mat.data().data(), mat.data().size()};
  const double m = max_abs_span(v);
  if (m == 0.0) return 0.0;
  if (p.is_infinity()) return m;

  // Fixed-size blocks summed in index order keep the result independent of
  // the worker count.
  const std::size_t nblocks = (v.size() + kNormBlock - 1) / kNormBlock;
  std::vector<double> partial(nblocks, 0.0);
  const double pe = p.exponent();
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (long long bi = 0; bi < static_cast<long long>(nblocks); ++bi) {
    const auto b = static_cast<std::size_t>(bi);
    const std::size_t lo = b * kNormBlock;
    const std::size_t hi = std::min(lo + kNormBlock, v.size());
    partial[b] = block_power_sum(v.subspan(lo, hi - lo), m, pe);
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return m * std::pow(total, 1.0 / pe);
}

double entrywise_norm_reference(const Matrix& mat, PNormSpec p) {
  if (mat.empty()) throw std::invalid_argument("entrywise_norm_reference: empty matrix");
  const std::span<const double> v{mat.data().data(), mat.data().size()};
  const double m = max_abs_span(v);
  if (m == 0.0) return 0.0;
  if (p.is_infinity()) return m;
  return m * std::pow(block_power_sum(v, m, p.exponent()), 1.0 / p.exponent());
}

std::vector<double> column_norms(const Matrix& m, PNormSpec p) {
  if (m.empty()) throw std::invalid_argument("column_norms: empty matrix");
  std::vector<double> out(m.cols());
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (long long jj = 0; jj < static_cast<long long>(m.cols()); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    out[j] = vector_norm(m.column(j), p);
  }
  return out;
}

} // namespace lplra
