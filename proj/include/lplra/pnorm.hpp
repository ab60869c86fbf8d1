#pragma once

#include "lplra/matrix.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lplra {

/// Entrywise norm exponent: a finite real p >= 1, or infinity as a distinct
/// case (never a sentinel float).
class PNormSpec {
public:
  static PNormSpec finite(double p);
  static PNormSpec infinity();
  static PNormSpec parse(std::string_view text);

  bool is_infinity() const { return infinite_; }
  /// Finite exponent; throws for the infinity case.
  double exponent() const;

  std::string to_string() const;

  bool operator==(const PNormSpec& other) const = default;

private:
  PNormSpec(double p, bool infinite) : p_(p), infinite_(infinite) {}
  double p_ = 2.0;
  bool infinite_ = false;
};

/// (sum |m_ij|^p)^(1/p), max |m_ij| for the infinity case. Accumulation
/// rescales by the max entry so large exponents do not overflow.
double entrywise_norm(const Matrix& m, PNormSpec p);
/// Serial single-loop reference for `entrywise_norm`.
double entrywise_norm_reference(const Matrix& m, PNormSpec p);

double vector_norm(std::span<const double> v, PNormSpec p);

/// Per-column norms of m.
std::vector<double> column_norms(const Matrix& m, PNormSpec p);

} // namespace lplra
