#include "doctest.h"

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "inflate/io.hpp"
#include "inflate/vec.hpp"

using namespace infl;
using namespace testutil;

namespace {

bool same_matrix(const SparseSymMatrix& a, const SparseSymMatrix& b) {
  return a.dim() == b.dim() && a.row_offsets() == b.row_offsets() &&
         a.col_indices() == b.col_indices() && a.values() == b.values();
}

}  // namespace

TEST_CASE("matrix market minimal symmetric file") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "2 2 3\n"
      "1 1 2.0\n"
      "2 1 1.0\n"
      "2 2 2.0\n");
  auto A = read_matrix_market(in);
  CHECK(A.dim() == 2);
  auto expect = from_dense({{2, 1}, {1, 2}});
  CHECK(same_matrix(A, expect));
}

TEST_CASE("matrix market rejects out-of-range and malformed input") {
  std::istringstream oob(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "2 2 1\n"
      "1 3 1.0\n");
  CHECK_THROWS_AS(read_matrix_market(oob), std::runtime_error);

  std::istringstream pattern(
      "%%MatrixMarket matrix coordinate pattern symmetric\n"
      "2 2 1\n"
      "1 1\n");
  CHECK_THROWS_AS(read_matrix_market(pattern), std::runtime_error);

  std::istringstream garbled(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "2 2 1\n"
      "1 x 1.0\n");
  CHECK_THROWS_AS(read_matrix_market(garbled), std::runtime_error);

  std::istringstream asym(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 2\n"
      "1 2 1.0\n"
      "2 1 5.0\n");
  CHECK_THROWS_AS(read_matrix_market(asym), std::invalid_argument);
}

TEST_CASE("matrix market general header with symmetric content is accepted") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 4\n"
      "1 1 2.0\n"
      "1 2 1.0\n"
      "2 1 1.0\n"
      "2 2 2.0\n");
  auto A = read_matrix_market(in);
  CHECK(same_matrix(A, from_dense({{2, 1}, {1, 2}})));
}

TEST_CASE("matrix market write emits the lower triangle") {
  std::ostringstream out;
  write_matrix_market(from_dense({{2, 1}, {1, 2}}), out);
  std::string text = out.str();
  CHECK(text.find("symmetric") != std::string::npos);
  // size line declares 2 stored entries
  CHECK(text.find("2 2 2") != std::string::npos);

  std::ostringstream id;
  write_matrix_market(identity(3), id);
  CHECK(id.str().find("3 3 3") != std::string::npos);
}

TEST_CASE("matrix market round trip is exact") {
  auto A = random_sparse(20, 0.25, 13);
  std::ostringstream out;
  write_matrix_market(A, out);
  std::istringstream in(out.str());
  auto B = read_matrix_market(in);
  CHECK(same_matrix(A, B));
}

TEST_CASE("generator spec parsing") {
  auto s = GeneratorSpec::parse("laplacian1d:100");
  CHECK(s.kind == GeneratorKind::laplacian1d);
  CHECK(s.n == 100);

  s = GeneratorSpec::parse("random_sparse:50:0.1:7");
  CHECK(s.kind == GeneratorKind::random_sparse);
  CHECK(s.n == 50);
  CHECK(s.density == doctest::Approx(0.1));
  CHECK(s.seed == 7);

  s = GeneratorSpec::parse("diag_dominant:100:10:0.5:3");
  CHECK(s.kind == GeneratorKind::diag_dominant);
  CHECK(s.spread == doctest::Approx(10.0));
  CHECK(s.coupling == doctest::Approx(0.5));

  s = GeneratorSpec::parse("near_degenerate:10:1e-6:3");
  CHECK(s.kind == GeneratorKind::near_degenerate);
  CHECK(s.gap == doctest::Approx(1e-6));

  CHECK_THROWS_AS(GeneratorSpec::parse("unknown:3"), std::invalid_argument);
  CHECK_THROWS_AS(GeneratorSpec::parse("laplacian1d:1"), std::invalid_argument);
  CHECK_THROWS_AS(GeneratorSpec::parse("random_sparse:50:1.5:7"), std::invalid_argument);
}

TEST_CASE("path graph generator has the analytic spectrum") {
  auto A = generate(GeneratorSpec::parse("laplacian1d:3"));
  auto oracle = dense_oracle(A);
  CHECK(oracle.values[0] == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(oracle.values[1] == doctest::Approx(2.0));
  CHECK(oracle.values[2] == doctest::Approx(2.0 + std::sqrt(2.0)));

  auto big = generate(GeneratorSpec::parse("laplacian1d:40"));
  auto ob = dense_oracle(big);
  for (int k = 1; k <= 40; ++k)
    CHECK(ob.values[k - 1] ==
          doctest::Approx(2.0 - 2.0 * std::cos(k * M_PI / 41.0)).epsilon(1e-10));
}

TEST_CASE("generators are deterministic for a fixed seed") {
  auto a = generate(GeneratorSpec::parse("random_sparse:50:0.1:7"));
  auto b = generate(GeneratorSpec::parse("random_sparse:50:0.1:7"));
  CHECK(same_matrix(a, b));
  auto c = generate(GeneratorSpec::parse("random_sparse:50:0.1:8"));
  CHECK_FALSE(same_matrix(a, c));

  auto d = generate(GeneratorSpec::parse("diag_dominant:30:10:0.5:3"));
  auto e = generate(GeneratorSpec::parse("diag_dominant:30:10:0.5:3"));
  CHECK(same_matrix(d, e));
}

TEST_CASE("near-degenerate generator controls the lowest gap") {
  auto A = generate(GeneratorSpec::parse("near_degenerate:10:1e-6:3"));
  auto oracle = dense_oracle(A);
  double gap = oracle.values[1] - oracle.values[0];
  CHECK(gap >= 0.5e-6);
  CHECK(gap <= 1.5e-6);
}

TEST_CASE("generator output satisfies the sparse invariants and spectra are sane") {
  for (const char* spec : {"laplacian1d:30", "random_sparse:40:0.2:5",
                           "diag_dominant:35:10:0.5:2", "near_degenerate:25:1e-4:9"}) {
    auto A = generate(GeneratorSpec::parse(spec));
    auto b = gershgorin_bounds(A);
    auto oracle = dense_oracle(A);  // also validates symmetry via the oracle
    CHECK(oracle.values.front() >= b.lo - 1e-10);
    CHECK(oracle.values.back() <= b.hi + 1e-10);
  }
}

TEST_CASE("diagonally dominated generator keeps the diagonal in charge") {
  auto A = generate(GeneratorSpec::parse("diag_dominant:40:10:0.1:4"));
  auto dense = to_dense(A);
  // Couplings are weak relative to the diagonal spread.
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(dense[i][i] >= 0.0);
    CHECK(dense[i][i] <= 10.0);
    for (std::size_t j = 0; j < 40; ++j)
      if (i != j) CHECK(std::abs(dense[i][j]) <= 0.1);
  }
}

TEST_CASE("trace serialization round trips") {
  Trace empty;
  std::ostringstream out;
  write_trace(empty, out);
  CHECK(out.str() == "step,m,lambda,mu,dt,lambda_tilde\n");
  std::istringstream back(out.str());
  CHECK(read_trace(back).empty());

  Trace one{{3, 7, 1.5, 2.5e-3, 0.25, 1.6}};
  std::ostringstream o2;
  write_trace(one, o2);
  std::istringstream i2(o2.str());
  auto r = read_trace(i2);
  REQUIRE(r.size() == 1);
  CHECK(r[0].step == 3);
  CHECK(r[0].m == 7);
  CHECK(r[0].lambda == 1.5);
  CHECK(r[0].mu == 2.5e-3);
  CHECK(r[0].dt == 0.25);
  CHECK(r[0].lambda_tilde == 1.6);
}

TEST_CASE("long trace round trip is bit exact") {
  Rng rng(22);
  Trace t;
  for (std::size_t i = 0; i < 1000; ++i)
    t.push_back({i, 2 * i, rng.uniform(-5.0, 5.0), std::exp(rng.uniform(-40.0, 2.0)),
                 rng.uniform(0.0, 1.0), rng.uniform(-5.0, 5.0)});
  std::ostringstream out;
  write_trace(t, out);
  std::istringstream in(out.str());
  auto r = read_trace(in);
  REQUIRE(r.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(r[i].step == t[i].step);
    CHECK(r[i].m == t[i].m);
    CHECK(r[i].lambda == t[i].lambda);  // bit-identical through 17 digits
    CHECK(r[i].mu == t[i].mu);
    CHECK(r[i].dt == t[i].dt);
    CHECK(r[i].lambda_tilde == t[i].lambda_tilde);
  }
}

TEST_CASE("trace reader rejects a malformed header") {
  std::istringstream in("step,lambda\n");
  CHECK_THROWS_AS(read_trace(in), std::runtime_error);
}

TEST_CASE("matrix file helpers work through the filesystem") {
  auto A = generate(GeneratorSpec::parse("random_sparse:15:0.3:44"));
  std::string path = "io_test_matrix.mtx";
  write_matrix_market_file(A, path);
  auto B = read_matrix_market_file(path);
  CHECK(same_matrix(A, B));
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_matrix_market_file("definitely_missing.mtx"), std::runtime_error);
}
