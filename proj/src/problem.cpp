#include "lplra/problem.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lplra {

ProblemInstance::ProblemInstance(Matrix a_, std::size_t k_, PNormSpec p_)
    : a(std::move(a_)), k(k_), p(p_) {
  if (a.empty()) throw std::invalid_argument("ProblemInstance: matrix is empty");
  if (k == 0 || k > std::min(a.rows(), a.cols())) {
    throw std::invalid_argument("ProblemInstance: k must be in [1, min(n, m)]");
  }
}

double residual_norm(const Matrix& a, const Factorization& f, PNormSpec p) {
  if (f.u.rows() != a.rows() || f.v.cols() != a.cols() || f.u.cols() != f.v.rows()) {
    std::ostringstream msg;
    msg << "residual_norm: shapes do not conform: a is " << a.rows() << "x" << a.cols()
        << ", u is " << f.u.rows() << "x" << f.u.cols() << ", v is " << f.v.rows() << "x"
        << f.v.cols();
    throw std::invalid_argument(msg.str());
  }
  return entrywise_norm(a - multiply(f.u, f.v), p);
}

} // namespace lplra
