#include "lplra/io.hpp"

#include "lplra/bench.hpp"
#include "lplra/errors.hpp"
#include "lplra/pnorm.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace lplra;

TEST_CASE("matrix market coordinate parsing") {
  std::istringstream in("%%MatrixMarket matrix coordinate real general\n"
                        "% a comment\n"
                        "2 2 1\n"
                        "1 1 3.5\n");
  const Matrix m = read_matrix_market(in);
  CHECK(m == Matrix(2, 2, {3.5, 0, 0, 0}));
}

TEST_CASE("matrix market array parsing is column major") {
  std::istringstream in("%%MatrixMarket matrix array real general\n"
                        "2 3\n"
                        "1\n2\n3\n4\n5\n6\n");
  const Matrix m = read_matrix_market(in);
  CHECK(m == Matrix(2, 3, {1, 3, 5, 2, 4, 6}));
}

TEST_CASE("matrix market refusals and parse errors carry line numbers") {
  {
    std::istringstream in("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 3.5\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(in), doctest::Contains("symmetric"), ParseError);
  }
  {
    std::istringstream in("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(in), doctest::Contains("pattern"), ParseError);
  }
  {
    std::istringstream in("not a header\n");
    CHECK_THROWS_AS(read_matrix_market(in), ParseError);
  }
  {
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
    try {
      read_matrix_market(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("out of range") != std::string::npos);
    }
  }
  {
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n2 2 5\n1 1 1.0\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(in), doctest::Contains("declared"), ParseError);
  }
}

TEST_CASE("matrix market round trip in both formats") {
  Matrix m(3, 2, {1.5, 0, -2.25, 4, 0, 1e-7});
  for (bool coordinate : {true, false}) {
    const std::string path = "roundtrip_test.mtx";
    write_matrix_market(path, m, coordinate);
    CHECK(read_matrix_market(path) == m);
    std::remove(path.c_str());
  }
}

TEST_CASE("bag of words parsing with caps") {
  const char* text = "2\n3\n2\n1 1 4\n2 3 1\n";
  {
    std::istringstream in(text);
    const Matrix m = read_bag_of_words(in, 0, 0);
    CHECK(m == Matrix(2, 3, {4, 0, 0, 0, 0, 1}));
  }
  {
    std::istringstream in(text);
    const Matrix m = read_bag_of_words(in, 1, 2);
    CHECK(m == Matrix(1, 2, {4, 0}));
  }
  {
    std::istringstream bad("2\n3\n9\n1 1 4\n");
    CHECK_THROWS_AS(read_bag_of_words(bad, 0, 0), ParseError);
  }
}

TEST_CASE("dense guard refuses oversized reads") {
  std::ostringstream big;
  big << "100000\n100000\n1\n1 1 1\n";
  std::istringstream in(big.str());
  CHECK_THROWS_WITH_AS(read_bag_of_words(in, 0, 0), doctest::Contains("caps"), RefusalError);
}

TEST_CASE("sparse generator: density, range, determinism, binomial count") {
  const Matrix a = gen_sparse_uniform(20, 30, 0.3, 5);
  CHECK(a == gen_sparse_uniform(20, 30, 0.3, 5));
  std::size_t nonzero = 0;
  for (double x : a.data()) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
    if (x != 0.0) ++nonzero;
  }
  // central 99.99% interval of Binomial(600, 0.3): 180 +- 3.89 * 11.22
  CHECK(nonzero >= 136);
  CHECK(nonzero <= 224);

  const Matrix full = gen_sparse_uniform(10, 10, 1.0, 6);
  for (double x : full.data()) CHECK(x > 0.0);
}

TEST_CASE("pm1 generator: values, mean, determinism") {
  const Matrix a = gen_pm1(200, 300, 7);
  CHECK(a == gen_pm1(200, 300, 7));
  double sum = 0.0;
  for (double x : a.data()) {
    CHECK((x == 1.0 || x == -1.0));
    sum += x;
  }
  CHECK(std::fabs(sum / (200.0 * 300.0)) <= 0.05);
}

TEST_CASE("intro block matrix layout") {
  const Matrix a = intro_block_matrix(4);
  CHECK(a(0, 0) == 4.0);
  CHECK(a(0, 1) == 0.0);
  CHECK(a(1, 0) == 0.0);
  CHECK(a(1, 1) == 1.0);
  CHECK(a(3, 3) == 1.0);
}

TEST_CASE("dataset spec parsing") {
  CHECK(DatasetSpec::parse("sparse:20:30:0.3:1").label == "sparse20x30");
  CHECK(DatasetSpec::parse("pm1:20:30:1").label == "pm1_20x30");
  CHECK(DatasetSpec::parse("mm:data/fidap005.mtx").label == "fidap005.mtx");
  CHECK_THROWS_AS(DatasetSpec::parse("nope:1"), ParseError);
  CHECK_THROWS_AS(DatasetSpec::parse("sparse:20:30"), ParseError);

  const Matrix planted = DatasetSpec::parse("planted:6:5:2:0.1:3").load(PNormSpec::finite(1.0));
  CHECK(planted.rows() == 6);
  CHECK(planted.cols() == 5);
}

TEST_CASE("run spec parsing") {
  std::istringstream in("# comment\n"
                        "dataset = sparse:20:30:0.3:1\n"
                        "p = 1\n"
                        "k = 1,2,3\n"
                        "algorithms = svd, sampled\n"
                        "seeds = 1,2\n"
                        "trials = 100\n"
                        "output = out.csv\n");
  RunSpec spec = parse_run_spec(in);
  CHECK(spec.k_values == std::vector<std::size_t>{1, 2, 3});
  CHECK(spec.algorithms == std::vector<std::string>{"svd", "sampled"});
  CHECK(spec.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(spec.trials == 100);
  CHECK(spec.p == PNormSpec::finite(1.0));

  std::istringstream missing("dataset = pm1:4:4:1\np = 2\nk = 1\n");
  CHECK_THROWS_AS(parse_run_spec(missing), ParseError);

  // an omitted seeds line stays empty for the caller's default to fill
  std::istringstream no_seeds("dataset = pm1:4:4:1\np = 2\nk = 1\nalgorithms = svd\n");
  CHECK(parse_run_spec(no_seeds).seeds.empty());

  std::istringstream bad_algo("dataset = pm1:4:4:1\np = 2\nk = 1\nalgorithms = fancy\n");
  CHECK_THROWS_AS(parse_run_spec(bad_algo), ParseError);
}

TEST_CASE("csv round-trip reproduces every numeric field exactly") {
  RunSpec spec;
  spec.dataset = DatasetSpec::parse("sparse:8:10:0.4:3");
  spec.k_values = {1, 2};
  spec.p = PNormSpec::finite(1.0);
  spec.algorithms = {"svd", "sampled"};
  spec.seeds = {1};
  spec.trials = 20;
  const std::vector<BenchRow> rows = run_experiment(spec);
  REQUIRE(rows.size() == 4);

  std::ostringstream out;
  write_csv(out, rows);
  std::istringstream back_in(out.str());
  const std::vector<BenchRow> back = read_csv(back_in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].error == rows[i].error);
    CHECK(back[i].svd_error == rows[i].svd_error);
    CHECK(back[i].ratio == rows[i].ratio);
    CHECK(back[i].elapsed_s == rows[i].elapsed_s);
    CHECK(back[i].k == rows[i].k);
    CHECK(back[i].seed == rows[i].seed);
    CHECK(back[i].status == "ok");
    // ratio consistency
    CHECK(std::fabs(back[i].ratio * back[i].svd_error - back[i].error) <=
          1e-9 * std::max(1.0, back[i].error));
  }
}

TEST_CASE("experiment rows are deterministic apart from wall time") {
  RunSpec spec;
  spec.dataset = DatasetSpec::parse("pm1:8:10:5");
  spec.k_values = {1};
  spec.p = PNormSpec::infinity();
  spec.algorithms = {"svd", "sampled", "sketched"};
  spec.seeds = {3};
  spec.trials = 10;
  const std::vector<BenchRow> a = run_experiment(spec);
  const std::vector<BenchRow> b = run_experiment(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].error == b[i].error);
    CHECK(a[i].ratio == b[i].ratio);
    CHECK(a[i].status == b[i].status);
  }
  // sketched at p = inf is recorded as a refusal row, not a crash
  CHECK(a.back().status.find("refused") == 0);
}

TEST_CASE("rank-k planted dataset gives ratio ~ 1 for the sampled heuristic") {
  RunSpec spec;
  spec.dataset = DatasetSpec::parse("planted:8:9:2:0:11");
  spec.k_values = {2, 3};
  spec.p = PNormSpec::finite(1.0);
  spec.algorithms = {"sampled"};
  spec.seeds = {1};
  spec.trials = 60;
  const std::vector<BenchRow> rows = run_experiment(spec);
  for (const BenchRow& r : rows) {
    REQUIRE(r.status == "ok");
    // both errors are ~0; the ratio guard keeps the row finite
    CHECK((r.ratio <= 1.0 + 1e-6 || r.error <= 1e-8));
  }
}

TEST_CASE("svg plot emission") {
  std::vector<BenchRow> rows;
  for (std::size_t k = 1; k <= 3; ++k) {
    BenchRow r;
    r.dataset = "demo";
    r.algorithm = "sampled";
    r.p = PNormSpec::finite(1.0);
    r.k = k;
    r.error = 1.0;
    r.svd_error = 2.0;
    r.ratio = 0.5 + 0.1 * static_cast<double>(k);
    rows.push_back(r);
  }
  const std::string path = "plot_test.svg";
  write_svg_plot(path, rows);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find("<svg") != std::string::npos);
  CHECK(buf.str().find("polyline") != std::string::npos);
  std::remove(path.c_str());
}
