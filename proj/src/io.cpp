#include "lplra/io.hpp"

#include "lplra/errors.hpp"
#include "lplra/rng.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace lplra {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void guard_dense(std::size_t n, std::size_t m, const std::string& hint) {
  if (n != 0 && m > kDenseEntryGuard / n) {
    std::ostringstream msg;
    msg << "dense guard: " << n << " x " << m << " needs " << static_cast<double>(n) * m
        << " entries, above the limit of " << kDenseEntryGuard << "; " << hint;
    throw RefusalError(msg.str());
  }
}

} // namespace

Matrix read_matrix_market(std::istream& in) {
  std::size_t lineno = 0;
  std::string line;

  if (!std::getline(in, line)) throw ParseError("matrix market: empty input", 1);
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") {
      throw ParseError("matrix market: header must begin with %%MatrixMarket", lineno);
    }
    if (lower(object) != "matrix") {
      throw ParseError("matrix market: unsupported object '" + object + "'", lineno);
    }
    const std::string fmt = lower(format), fld = lower(field), sym = lower(symmetry);
    if (fmt != "coordinate" && fmt != "array") {
      throw ParseError("matrix market: unsupported format '" + format + "'", lineno);
    }
    if (fld != "real") {
      throw ParseError("matrix market: unsupported field qualifier '" + field + "'", lineno);
    }
    if (sym != "general") {
      throw ParseError("matrix market: unsupported symmetry qualifier '" + symmetry + "'",
                       lineno);
    }

    // comments, then the size line
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line[0] == '%') continue;
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (!blank) break;
    }
    std::istringstream ss(line);
    std::size_t n = 0, m = 0;
    if (!(ss >> n >> m) || n == 0 || m == 0) {
      throw ParseError("matrix market: bad size line", lineno);
    }

    if (fmt == "coordinate") {
      std::size_t nnz = 0;
      if (!(ss >> nnz)) throw ParseError("matrix market: size line missing nnz", lineno);
      guard_dense(n, m, "matrix too large to densify");
      Matrix out(n, m);
      std::size_t seen = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        bool blank = true;
        for (char c : line)
          if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;
        std::istringstream es(line);
        std::size_t i = 0, j = 0;
        double v = 0.0;
        if (!(es >> i >> j >> v)) throw ParseError("matrix market: bad entry record", lineno);
        if (i < 1 || i > n || j < 1 || j > m) {
          throw ParseError("matrix market: index out of range", lineno);
        }
        if (!std::isfinite(v)) throw ParseError("matrix market: non-finite value", lineno);
        out(i - 1, j - 1) += v;
        ++seen;
      }
      if (seen != nnz) {
        throw ParseError("matrix market: header declared " + std::to_string(nnz) +
                             " entries but file has " + std::to_string(seen),
                         lineno);
      }
      return out;
    }

    // array format: column-major dense values
    guard_dense(n, m, "matrix too large to densify");
    Matrix out(n, m);
    std::size_t idx = 0;
    const std::size_t total = n * m;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '%') continue;
      std::istringstream es(line);
      double v = 0.0;
      while (es >> v) {
        if (idx >= total) throw ParseError("matrix market: too many array values", lineno);
        if (!std::isfinite(v)) throw ParseError("matrix market: non-finite value", lineno);
        out(idx % n, idx / n) = v;
        ++idx;
      }
    }
    if (idx != total) {
      throw ParseError("matrix market: expected " + std::to_string(total) + " values, found " +
                           std::to_string(idx),
                       lineno);
    }
    return out;
  }
}

Matrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_matrix_market(in);
}

void write_matrix_market(const std::string& path, const Matrix& m, bool coordinate) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  char buf[64];
  if (coordinate) {
    std::size_t nnz = 0;
    for (double v : m.data())
      if (v != 0.0) ++nnz;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << " " << m.cols() << " " << nnz << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m(i, j) == 0.0) continue;
        std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
        out << (i + 1) << " " << (j + 1) << " " << buf << "\n";
      }
    }
  } else {
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << " " << m.cols() << "\n";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      for (std::size_t i = 0; i < m.rows(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
        out << buf << "\n";
      }
    }
  }
}

Matrix read_bag_of_words(std::istream& in, std::size_t max_docs, std::size_t max_words) {
  std::size_t lineno = 0;
  std::string line;
  auto read_header = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError(std::string("docword: missing ") + what, lineno + 1);
    ++lineno;
    std::istringstream ss(line);
    std::size_t v = 0;
    if (!(ss >> v) || v == 0) throw ParseError(std::string("docword: bad ") + what, lineno);
    return v;
  };
  const std::size_t docs = read_header("document count");
  const std::size_t words = read_header("word count");
  const std::size_t nnz = read_header("nnz count");

  const std::size_t n = max_docs == 0 ? docs : std::min(docs, max_docs);
  const std::size_t m = max_words == 0 ? words : std::min(words, max_words);
  guard_dense(n, m, "pass max_docs/max_words caps");

  Matrix out(n, m);
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    std::istringstream es(line);
    std::size_t d = 0, w = 0;
    double count = 0.0;
    if (!(es >> d >> w >> count)) throw ParseError("docword: bad record", lineno);
    if (d < 1 || d > docs || w < 1 || w > words) {
      throw ParseError("docword: index out of range", lineno);
    }
    ++seen;
    if (d > n || w > m) continue; // outside the truncated block
    out(d - 1, w - 1) = count;
  }
  if (seen != nnz) {
    throw ParseError("docword: header declared " + std::to_string(nnz) + " records but file has " +
                         std::to_string(seen),
                     lineno);
  }
  return out;
}

Matrix read_bag_of_words(const std::string& path, std::size_t max_docs, std::size_t max_words) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_bag_of_words(in, max_docs, max_words);
}

Matrix gen_sparse_uniform(std::size_t n, std::size_t m, double density, std::uint64_t seed) {
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument("gen_sparse_uniform: density must be in (0, 1]");
  }
  Rng rng(Rng::mix(seed, 0x5ba15eULL));
  Matrix out(n, m);
  for (double& x : out.data()) {
    const bool on = rng.uniform01() < density;
    const double v = rng.uniform01();
    x = on ? v : 0.0;
  }
  return out;
}

Matrix gen_pm1(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(Rng::mix(seed, 0x91a1ULL));
  Matrix out(n, m);
  for (double& x : out.data()) x = rng.coin() ? 1.0 : -1.0;
  return out;
}

Matrix intro_block_matrix(std::size_t n) {
  if (n < 2) throw std::invalid_argument("intro_block_matrix: n must be >= 2");
  Matrix out(n, n);
  out(0, 0) = static_cast<double>(n);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) out(i, j) = 1.0;
  return out;
}

} // namespace lplra
