#pragma once

#include "lplra/matrix.hpp"
#include "lplra/pnorm.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lplra {

/// Dataset descriptor, parsed from the compact "kind:arg:..." form:
///   mm:<path>                      Matrix Market file
///   bow:<path>:<max_docs>:<max_words>
///   sparse:<n>:<m>:<density>:<seed>
///   pm1:<n>:<m>:<seed>
///   planted:<n>:<m>:<k>:<delta_scale>:<seed>
///   introblock:<n>
struct DatasetSpec {
  std::string text;  // original descriptor
  std::string label; // short name for CSV rows

  static DatasetSpec parse(const std::string& text);
  /// Materializes the matrix; planted datasets use p for their bookkeeping.
  Matrix load(PNormSpec p) const;
};

/// One benchmark sweep: dataset x k values x algorithms x seeds.
struct RunSpec {
  DatasetSpec dataset;
  std::vector<std::size_t> k_values;
  PNormSpec p = PNormSpec::finite(2.0);
  std::vector<std::string> algorithms; // svd, exhaustive, sampled, bicriteria, reduce, sketched
  std::vector<std::uint64_t> seeds;
  std::string output;
  std::string plot; // optional SVG path
  std::uint64_t trials = 2000;
};

/// Flat key=value text format (dataset, k, p, algorithms, seeds, trials,
/// output, plot); lists are comma-separated, '#' starts a comment.
RunSpec parse_run_spec(std::istream& in);
RunSpec parse_run_spec_file(const std::string& path);

struct BenchRow {
  std::string dataset;
  std::string algorithm;
  PNormSpec p = PNormSpec::finite(2.0);
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double error = 0.0;
  double svd_error = 0.0;
  double ratio = 0.0;
  std::size_t columns_used = 0;
  double elapsed_s = 0.0;
  std::string status = "ok";
};

/// Runs every (k, seed, algorithm) cell; individual failures become rows with
/// a non-ok status and the sweep continues. Rows come back in spec order.
std::vector<BenchRow> run_experiment(const RunSpec& spec);

inline constexpr const char* kCsvHeader =
    "dataset,algorithm,p,k,seed,error,svd_error,ratio,columns_used,elapsed_s,status";

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_csv_file(const std::string& path, const std::vector<BenchRow>& rows);
std::vector<BenchRow> read_csv(std::istream& in);

/// Static SVG plot of ratio vs k, one polyline per algorithm.
void write_svg_plot(const std::string& path, const std::vector<BenchRow>& rows);

} // namespace lplra
