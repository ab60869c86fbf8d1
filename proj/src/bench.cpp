#include "lplra/bench.hpp"

#include "lplra/adaptive.hpp"
#include "lplra/enumeration.hpp"
#include "lplra/errors.hpp"
#include "lplra/io.hpp"
#include "lplra/oracle.hpp"
#include "lplra/rank_reduction.hpp"
#include "lplra/rng.hpp"
#include "lplra/svd.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lplra {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::size_t to_size(const std::string& s, const char* what) {
  try {
    return static_cast<std::size_t>(std::stoull(s));
  } catch (...) {
    throw ParseError(std::string("bad ") + what + " '" + s + "'", 0);
  }
}

double to_double(const std::string& s, const char* what) {
  try {
    return std::stod(s);
  } catch (...) {
    throw ParseError(std::string("bad ") + what + " '" + s + "'", 0);
  }
}

std::string basename_of(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

} // namespace

DatasetSpec DatasetSpec::parse(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  const std::string& kind = parts[0];
  DatasetSpec spec;
  spec.text = text;

  auto need = [&](std::size_t n) {
    if (parts.size() != n) {
      throw ParseError("dataset '" + text + "': expected " + std::to_string(n - 1) +
                           " arguments after '" + kind + "'",
                       0);
    }
  };

  if (kind == "mm") {
    need(2);
    spec.label = basename_of(parts[1]);
  } else if (kind == "bow") {
    need(4);
    spec.label = basename_of(parts[1]);
  } else if (kind == "sparse") {
    need(5);
    spec.label = "sparse" + parts[1] + "x" + parts[2];
  } else if (kind == "pm1") {
    need(4);
    spec.label = "pm1_" + parts[1] + "x" + parts[2];
  } else if (kind == "planted") {
    need(6);
    spec.label = "planted" + parts[1] + "x" + parts[2] + "k" + parts[3];
  } else if (kind == "introblock") {
    need(2);
    spec.label = "introblock" + parts[1];
  } else {
    throw ParseError("unknown dataset kind '" + kind + "'", 0);
  }
  return spec;
}

Matrix DatasetSpec::load(PNormSpec p) const {
  const std::vector<std::string> parts = split(text, ':');
  const std::string& kind = parts[0];
  if (kind == "mm") return read_matrix_market(parts[1]);
  if (kind == "bow") {
    return read_bag_of_words(parts[1], to_size(parts[2], "max_docs"), to_size(parts[3], "max_words"));
  }
  if (kind == "sparse") {
    return gen_sparse_uniform(to_size(parts[1], "n"), to_size(parts[2], "m"),
                              to_double(parts[3], "density"), to_size(parts[4], "seed"));
  }
  if (kind == "pm1") {
    return gen_pm1(to_size(parts[1], "n"), to_size(parts[2], "m"), to_size(parts[3], "seed"));
  }
  if (kind == "planted") {
    return make_planted(to_size(parts[1], "n"), to_size(parts[2], "m"), to_size(parts[3], "k"), p,
                        to_double(parts[4], "delta_scale"), to_size(parts[5], "seed"))
        .a;
  }
  if (kind == "introblock") return intro_block_matrix(to_size(parts[1], "n"));
  throw ParseError("unknown dataset kind '" + kind + "'", 0);
}

RunSpec parse_run_spec(std::istream& in) {
  RunSpec spec;
  bool have_dataset = false, have_p = false, have_k = false, have_algos = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("run spec: expected key = value", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "dataset") {
      spec.dataset = DatasetSpec::parse(value);
      have_dataset = true;
    } else if (key == "p") {
      spec.p = PNormSpec::parse(value);
      have_p = true;
    } else if (key == "k") {
      for (const std::string& t : split(value, ','))
        spec.k_values.push_back(to_size(trim(t), "k"));
      have_k = true;
    } else if (key == "algorithms") {
      for (const std::string& t : split(value, ',')) spec.algorithms.push_back(trim(t));
      have_algos = true;
    } else if (key == "seeds") {
      for (const std::string& t : split(value, ','))
        spec.seeds.push_back(to_size(trim(t), "seed"));
    } else if (key == "trials") {
      spec.trials = to_size(value, "trials");
    } else if (key == "output") {
      spec.output = value;
    } else if (key == "plot") {
      spec.plot = value;
    } else {
      throw ParseError("run spec: unknown key '" + key + "'", lineno);
    }
  }
  if (!have_dataset || !have_p || !have_k || !have_algos) {
    throw ParseError("run spec: dataset, p, k and algorithms are required", lineno);
  }
  // a missing seeds line stays empty so the caller can substitute its default
  // (the CLI uses LPLRA_SEED when set)

  static const std::set<std::string> known = {"svd",        "exhaustive", "sampled",
                                              "bicriteria", "reduce",     "sketched"};
  for (const std::string& a : spec.algorithms) {
    if (!known.count(a)) throw ParseError("run spec: unknown algorithm '" + a + "'", 0);
  }
  return spec;
}

RunSpec parse_run_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return parse_run_spec(in);
}

namespace {

struct CellResult {
  double error = 0.0;
  std::size_t columns_used = 0;
};

CellResult run_cell(const Matrix& a, const std::string& algo, std::size_t k, PNormSpec p,
                    std::uint64_t seed, std::uint64_t trials) {
  if (algo == "svd") {
    return {baseline_error(a, k, p), k};
  }
  if (algo == "exhaustive" || algo == "sampled") {
    SubsetSearchConfig cfg;
    cfg.strategy = algo == "exhaustive" ? SubsetSearchConfig::Strategy::Exhaustive
                                        : SubsetSearchConfig::Strategy::Sampled;
    cfg.trials = trials;
    cfg.seed = seed;
    SubsetSearchOutcome out = best_subset(a, k, p, cfg);
    return {out.report.error_p, out.factorization.u.cols()};
  }
  if (algo == "bicriteria") {
    BicriteriaOutcome out = bicriteria_approx(a, k, p, seed);
    return {out.report.error_p, out.factorization.u.cols()};
  }
  if (algo == "reduce" || algo == "sketched") {
    BicriteriaOutcome bi = bicriteria_approx(a, k, p, seed);
    SubsetSearchConfig inner;
    inner.seed = Rng::mix(seed, 0x4edu);
    inner.trials = trials;
    if (algo == "reduce") {
      ReduceOutcome out = reduce_rank(a, bi.factorization, k, p, inner);
      return {out.report.error_p, out.factorization.u.cols()};
    }
    SketchedOutcome out = sketched_reduce(a, bi.factorization, k, p, 0, Rng::mix(seed, 0x51u));
    return {out.report.error_p, out.factorization.u.cols()};
  }
  throw RefusalError("unknown algorithm '" + algo + "'");
}

} // namespace

std::vector<BenchRow> run_experiment(const RunSpec& spec) {
  const Matrix a = spec.dataset.load(spec.p);
  const std::vector<std::uint64_t> seeds =
      spec.seeds.empty() ? std::vector<std::uint64_t>{0} : spec.seeds;
  std::vector<BenchRow> rows;
  for (std::size_t k : spec.k_values) {
    if (k == 0 || k > std::min(a.rows(), a.cols())) {
      throw ParseError("run spec: k = " + std::to_string(k) + " exceeds min(n, m)", 0);
    }
    const double svd_err = baseline_error(a, k, spec.p);
    for (std::uint64_t seed : seeds) {
      for (const std::string& algo : spec.algorithms) {
        BenchRow row;
        row.dataset = spec.dataset.label;
        row.algorithm = algo;
        row.p = spec.p;
        row.k = k;
        row.seed = seed;
        row.svd_error = svd_err;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          CellResult cell = run_cell(a, algo, k, spec.p, seed, spec.trials);
          row.error = cell.error;
          row.columns_used = cell.columns_used;
          row.ratio = svd_err > 0.0 ? cell.error / svd_err : (cell.error > 0.0 ? INFINITY : 1.0);
        } catch (const RefusalError& e) {
          row.status = std::string("refused: ") + e.what();
        } catch (const std::exception& e) {
          row.status = std::string("failed: ") + e.what();
        }
        row.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kCsvHeader << "\n";
  for (const BenchRow& r : rows) {
    std::string status = r.status;
    for (char& c : status)
      if (c == ',' || c == '\n') c = ';';
    out << r.dataset << "," << r.algorithm << "," << r.p.to_string() << "," << r.k << "," << r.seed
        << "," << fmt(r.error) << "," << fmt(r.svd_error) << "," << fmt(r.ratio) << ","
        << r.columns_used << "," << fmt(r.elapsed_s) << "," << status << "\n";
  }
}

void write_csv_file(const std::string& path, const std::vector<BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_csv(out, rows);
}

std::vector<BenchRow> read_csv(std::istream& in) {
  std::vector<BenchRow> rows;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("csv: empty", 1);
  ++lineno;
  if (trim(line) != kCsvHeader) throw ParseError("csv: unexpected header", lineno);
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 11) throw ParseError("csv: expected 11 fields", lineno);
    BenchRow r;
    r.dataset = f[0];
    r.algorithm = f[1];
    r.p = PNormSpec::parse(f[2]);
    r.k = to_size(f[3], "k");
    r.seed = to_size(f[4], "seed");
    r.error = to_double(f[5], "error");
    r.svd_error = to_double(f[6], "svd_error");
    r.ratio = to_double(f[7], "ratio");
    r.columns_used = to_size(f[8], "columns_used");
    r.elapsed_s = to_double(f[9], "elapsed_s");
    r.status = f[10];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_svg_plot(const std::string& path, const std::vector<BenchRow>& rows) {
  std::map<std::string, std::map<std::size_t, double>> series; // algo -> k -> ratio
  double max_ratio = 1.0;
  std::size_t kmin = SIZE_MAX, kmax = 0;
  for (const BenchRow& r : rows) {
    if (r.status != "ok" || !std::isfinite(r.ratio)) continue;
    auto& at = series[r.algorithm][r.k];
    at = std::max(at, 0.0) + r.ratio; // average later
    kmin = std::min(kmin, r.k);
    kmax = std::max(kmax, r.k);
  }
  std::map<std::string, std::map<std::size_t, std::size_t>> counts;
  for (const BenchRow& r : rows)
    if (r.status == "ok" && std::isfinite(r.ratio)) counts[r.algorithm][r.k] += 1;
  for (auto& [algo, pts] : series)
    for (auto& [k, v] : pts) {
      v /= static_cast<double>(counts[algo][k]);
      max_ratio = std::max(max_ratio, v);
    }
  if (series.empty() || kmax < kmin) throw std::invalid_argument("write_svg_plot: no usable rows");

  const double w = 640, h = 420, ml = 60, mr = 150, mt = 30, mb = 50;
  auto xc = [&](double k) {
    return kmax == kmin ? ml + (w - ml - mr) / 2
                        : ml + (k - kmin) / (kmax - kmin) * (w - ml - mr);
  };
  auto yc = [&](double v) { return h - mb - v / (1.1 * max_ratio) * (h - mt - mb); };

  static const char* colors[] = {"#2ca02c", "#1f77b4", "#d62728", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
  // ratio = 1 guide
  out << "<line x1=\"" << ml << "\" y1=\"" << yc(1.0) << "\" x2=\"" << w - mr << "\" y2=\""
      << yc(1.0) << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
  out << "<text x=\"" << ml - 8 << "\" y=\"" << yc(1.0) + 4
      << "\" text-anchor=\"end\" font-size=\"12\">1.0</text>\n";
  for (std::size_t k = kmin; k <= kmax; ++k) {
    out << "<text x=\"" << xc(static_cast<double>(k)) << "\" y=\"" << h - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << k << "</text>\n";
  }
  out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">k</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
      << "\" font-size=\"13\" transform=\"rotate(-90 16 " << (mt + h - mb) / 2
      << ")\" text-anchor=\"middle\">error / svd error</text>\n";

  std::size_t ci = 0;
  double legend_y = mt + 10;
  for (const auto& [algo, pts] : series) {
    const char* color = colors[ci % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [k, v] : pts) out << xc(static_cast<double>(k)) << "," << yc(v) << " ";
    out << "\"/>\n";
    for (const auto& [k, v] : pts) {
      out << "<circle cx=\"" << xc(static_cast<double>(k)) << "\" cy=\"" << yc(v)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "<rect x=\"" << w - mr + 10 << "\" y=\"" << legend_y - 9
        << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << w - mr + 28 << "\" y=\"" << legend_y + 2 << "\" font-size=\"12\">"
        << algo << "</text>\n";
    legend_y += 20;
    ++ci;
  }
  out << "</svg>\n";
}

} // namespace lplra
