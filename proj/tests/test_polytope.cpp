#include <doctest.h>

#include <random>

#include "copekit/polytope.hpp"
#include "copekit/theories.hpp"
#include "oracles.hpp"

using namespace copekit;

namespace {

std::vector<std::vector<Rational>> distinct_columns(const CopeMatrix& c) {
  std::vector<std::vector<Rational>> out;
  for (std::size_t j = 0; j < c.num_preparations(); ++j) out.push_back(c.exact().col(j));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TEST_CASE("boxworld square has its four columns as vertices") {
  auto m = merge_measurements(boxworld());
  auto q = span_simplex_polytope(m);
  CHECK(q.ambient_dim == 4);
  CHECK(q.vertices.size() == 4);
  CHECK(q.vertices == distinct_columns(m));
  CHECK(q.vertices == oracle::span_simplex_vertices(m.exact()));
  CHECK(covers_columns(q, m));
}

TEST_CASE("extended boxworld has five vertices") {
  auto m = merge_measurements(extended_boxworld());
  auto q = span_simplex_polytope(m);
  CHECK(q.vertices.size() == 5);
  CHECK(q.vertices == distinct_columns(m));
}

TEST_CASE("double description agrees with the tight-set oracle") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto c = oracle::random_shape_cope(rng, 6, 6);
    auto m = merge_measurements(c);
    CHECK(span_simplex_polytope(m).vertices == oracle::span_simplex_vertices(m.exact()));
    ++checked;
  }
  CHECK(checked == 150);
  auto s = merge_measurements(spekkens());
  CHECK(span_simplex_polytope(s).vertices == oracle::span_simplex_vertices(s.exact()));
  CHECK(span_simplex_polytope(s).vertices.size() == 8);
}

TEST_CASE("response vertices have unit block sums") {
  auto v = response_vertices(spekkens());
  CHECK(v.size() == 8);
  for (const auto& x : v) {
    CHECK(x[0] + x[1] == 1);
    CHECK(x[2] + x[3] == 1);
    CHECK(x[4] + x[5] == 1);
    for (const auto& e : x) CHECK((e == 0 || e == 1));
  }
  // candidates add the six columns
  CHECK(response_candidates(spekkens()).size() == 14);
}

TEST_CASE("polytope preconditions") {
  CHECK_THROWS_AS(span_simplex_polytope(boxworld()), PreconditionError);
  CHECK_THROWS_AS(span_simplex_polytope(merge_measurements(boxworld()).as_float()), PreconditionError);
  CHECK_THROWS_AS(span_simplex_polytope(identity_cope(65)), GuardExceeded);
}
