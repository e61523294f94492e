#include "doctest.h"

#include <random>
#include <vector>

#include "sdnn/errors.hpp"
#include "sdnn/sparse_matrix.hpp"
#include "support/oracles.hpp"

using namespace sdnn;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an sdnn::Error");
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("build_from_triples: single entry") {
  std::vector<Triple> t{{1, 1, 1.0}};
  auto m = build_from_triples(t, 2, 2);
  CHECK(m.n_rows() == 2);
  CHECK(m.n_cols() == 2);
  CHECK(m.nnz() == 1);
  CHECK(std::vector<Offset>(m.row_offsets().begin(), m.row_offsets().end()) ==
        std::vector<Offset>{0, 1, 1});
}

TEST_CASE("build_from_triples: empty") {
  auto m = build_from_triples({}, 3, 3);
  CHECK(m.nnz() == 0);
  CHECK(std::vector<Offset>(m.row_offsets().begin(), m.row_offsets().end()) ==
        std::vector<Offset>{0, 0, 0, 0});
}

TEST_CASE("build_from_triples: canonicalizes order") {
  std::vector<Triple> t{{1, 2, 0.5}, {2, 1, 0.5}, {1, 1, 1.0}};
  auto m = build_from_triples(t, 2, 2);
  CHECK(std::vector<ColIndex>(m.row_cols(0).begin(), m.row_cols(0).end()) ==
        std::vector<ColIndex>{0, 1});
  CHECK(std::vector<ColIndex>(m.row_cols(1).begin(), m.row_cols(1).end()) ==
        std::vector<ColIndex>{0});
  CHECK(std::vector<double>(m.values().begin(), m.values().end()) ==
        std::vector<double>{1.0, 0.5, 0.5});
}

TEST_CASE("build_from_triples: errors") {
  std::vector<Triple> oob{{3, 1, 1.0}};
  CHECK(kind_of([&] { build_from_triples(oob, 2, 2); }) == ErrorKind::bounds);
  std::vector<Triple> zero_index{{0, 1, 1.0}};
  CHECK(kind_of([&] { build_from_triples(zero_index, 2, 2); }) == ErrorKind::bounds);
  std::vector<Triple> dup{{1, 1, 1.0}, {2, 2, 1.0}, {1, 1, 2.0}};
  CHECK(kind_of([&] { build_from_triples(dup, 2, 2); }) == ErrorKind::duplicate);
  std::vector<Triple> nan{{1, 1, std::numeric_limits<double>::quiet_NaN()}};
  CHECK(kind_of([&] { build_from_triples(nan, 2, 2); }) == ErrorKind::value);
  std::vector<Triple> zero{{1, 1, 0.0}};
  CHECK(kind_of([&] { build_from_triples(zero, 2, 2); }) == ErrorKind::value);
}

TEST_CASE("bounds error names the offending triple") {
  std::vector<Triple> oob{{1, 7, 1.0}};
  try {
    build_from_triples(oob, 2, 2);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("(1,7,") != std::string::npos);
  }
}

TEST_CASE("to_triples: base conversion") {
  CHECK(to_triples(SparseMatrix(2, 2)).empty());
  std::vector<Triple> t{{1, 1, 1.0}};
  CHECK(to_triples(build_from_triples(t, 2, 2)) == t);
}

TEST_CASE("round trip through triples is exact for random matrices") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = testing::random_sparse(8, 8, 0.25, -3.0, 3.0, rng);
    auto triples = to_triples(m);
    CHECK(build_from_triples(triples, 8, 8) == m);
    // canonical order: row-major, strictly increasing columns
    for (std::size_t i = 1; i < triples.size(); ++i) {
      const auto& a = triples[i - 1];
      const auto& b = triples[i];
      CHECK((a.row < b.row || (a.row == b.row && a.col < b.col)));
    }
    CHECK(m.row_offsets().back() == m.nnz());
    CHECK(m.col_indices().size() == m.nnz());
  }
}

TEST_CASE("validate reports the first violation") {
  CsrParts good{2, 2, {0, 1, 2}, {0, 1}, {1.0, 2.0}};
  CHECK(validate(good).ok());
  CHECK(validate(SparseMatrix::adopt(good)).ok());

  CsrParts decreasing{3, 2, {0, 2, 1, 2}, {0, 1}, {1.0, 2.0}};
  auto v = validate(decreasing);
  CHECK_FALSE(v.ok());
  CHECK(v.violation == "row_offsets non-monotone at row 1");

  CsrParts zero{2, 2, {0, 1, 2}, {0, 1}, {1.0, 0.0}};
  CHECK(validate(zero).violation == "explicit zero at (1,1)");

  CsrParts unsorted{1, 3, {0, 2}, {2, 1}, {1.0, 1.0}};
  CHECK(validate(unsorted).violation.find("strictly increasing") != std::string::npos);

  CsrParts wide{1, 2, {0, 1}, {5}, {1.0}};
  CHECK(validate(wide).violation.find("out of range") != std::string::npos);

  CHECK(kind_of([&] { SparseMatrix::adopt(zero); }) == ErrorKind::value);
}

TEST_CASE("CategorySet requires ascending unique 1-based rows") {
  CHECK(CategorySet({1, 5, 9}).size() == 3);
  CHECK(kind_of([] { CategorySet({3, 3}); }) == ErrorKind::duplicate);
  CHECK(kind_of([] { CategorySet({4, 2}); }) == ErrorKind::value);
  CHECK(kind_of([] { CategorySet({0}); }) == ErrorKind::value);
  CHECK(CategorySet({1, 2, 5}).minus(CategorySet({2, 3})) == CategorySet({1, 5}));
}
