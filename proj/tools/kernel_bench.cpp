// Times the OpenMP kernels against their serial reference twins.
#include "lplra/enumeration.hpp"
#include "lplra/matrix.hpp"
#include "lplra/pnorm.hpp"
#include "lplra/regression.hpp"
#include "lplra/rng.hpp"
#include "lplra/threading.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

namespace {

using lplra::Matrix;
using lplra::PNormSpec;
using lplra::Rng;

Matrix random_matrix(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(n, m);
  for (double& x : a.data()) x = rng.uniform(-1.0, 1.0);
  return a;
}

double time_of(const std::function<void()>& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
         static_cast<double>(reps);
}

void report(const std::string& name, double serial, double parallel) {
  std::printf("%-34s %12.4f %12.4f %9.2fx\n", name.c_str(), serial * 1e3, parallel * 1e3,
              serial / parallel);
}

} // namespace

int main() {
  std::printf("%-34s %12s %12s %9s\n", "kernel", "serial (ms)", "openmp (ms)", "speedup");

  {
    const Matrix a = random_matrix(400, 300, 1);
    const Matrix b = random_matrix(300, 350, 2);
    const double ts = time_of([&] { lplra::multiply_reference(a, b); }, 5);
    const double tp = time_of([&] { lplra::multiply(a, b); }, 5);
    report("multiply 400x300 * 300x350", ts, tp);
  }

  {
    const Matrix a = random_matrix(1200, 900, 3);
    const PNormSpec p = PNormSpec::finite(3.0);
    const double ts = time_of([&] { lplra::entrywise_norm_reference(a, p); }, 20);
    const double tp = time_of([&] { lplra::entrywise_norm(a, p); }, 20);
    report("entrywise_norm 1200x900 p=3", ts, tp);
  }

  {
    const Matrix a = random_matrix(120, 80, 4);
    const Matrix u = random_matrix(120, 5, 5);
    const PNormSpec p = PNormSpec::finite(1.5);
    lplra::RegressionConfig cfg;
    const double ts = time_of([&] { lplra::solve_multi_regression_reference(u, a, p, cfg); }, 3);
    const double tp = time_of([&] { lplra::solve_multi_regression(u, a, p, cfg); }, 3);
    report("multi_regression 120x80 r=5 p=1.5", ts, tp);
  }

  {
    const Matrix a = random_matrix(24, 18, 6);
    lplra::SubsetSearchConfig serial_cfg;
    serial_cfg.regression.mode = lplra::RegressionMode::Iterative;
    const PNormSpec p = PNormSpec::finite(2.0);
    const double ts = time_of(
        [&] {
          lplra::set_max_threads(1);
          lplra::best_subset(a, 3, p, serial_cfg);
        },
        2);
    const double tp = time_of(
        [&] {
          lplra::set_max_threads(0);
          lplra::best_subset(a, 3, p, serial_cfg);
        },
        2);
    lplra::set_max_threads(0);
    report("exhaustive subsets C(18,3) p=2", ts, tp);
  }

  return 0;
}
