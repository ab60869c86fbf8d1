#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace lplra {

// Deterministic splitmix64 stream. Used instead of <random> engines so that
// fixtures and sampling reproduce bit-for-bit across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // unbiased draw from [0, n)
  std::uint64_t below(std::uint64_t n);

  bool coin() { return (next_u64() & 1ULL) != 0; }

  // standard exponential via inversion
  double exponential();

  // seed derivation for child streams
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c);

private:
  std::uint64_t state_;
};

// k distinct indices from [0, n), sorted ascending.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

} // namespace lplra
