#include "lplra/threading.hpp"

#include <atomic>
#include <omp.h>

namespace lplra {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
  int n = g_max_threads.load();
  return n == 0 ? omp_get_max_threads() : n;
}

} // namespace lplra
