#include <doctest.h>

#include "copekit/sperner.hpp"
#include "copekit/theories.hpp"
#include "oracles.hpp"

using namespace copekit;

TEST_CASE("central binomial coefficients") {
  const unsigned long long expected[] = {1, 1, 2, 3, 6, 10, 20, 35, 70, 126, 252};
  for (std::size_t k = 0; k <= 10; ++k) CHECK(central_binomial(k) == expected[k]);
}

TEST_CASE("antichain oracles agree with each other") {
  for (unsigned k = 0; k <= 4; ++k) CHECK(oracle::max_antichain_exhaustive(k) == oracle::max_antichain_dilworth(k));
}

TEST_CASE("bounds") {
  CHECK(sperner_ontic_bound(1) == 1);
  CHECK(sperner_ontic_bound(2) == 2);
  CHECK(sperner_ontic_bound(3) == 3);
  CHECK(sperner_ontic_bound(4) == 4);
  CHECK(sperner_ontic_bound(7) == 5);
  CHECK(sperner_ontic_bound(10) == 5);
  CHECK(sperner_ontic_bound(11) == 6);
  CHECK(sperner_span_bound(10) == 5);
  CHECK(sperner_span_bound(6) == 4);
  CHECK(sperner_span_bound(19) == 5);
  CHECK(sperner_span_bound(20) == 6);
  CHECK_THROWS_AS(sperner_ontic_bound(0), PreconditionError);
}

TEST_CASE("witness on the toy theory") {
  auto w = sperner_submatrix(spekkens());
  REQUIRE(w);
  CHECK(w->m == 6);  // every row has a single zero
  CHECK(is_sperner_witness(spekkens(), *w));
  CHECK(w->ontic_dim_lower_bound == 4);
  CHECK(w->factor_span_lower_bound == 4);  // equals the rank, so no separation
}

TEST_CASE("no witness without zeros") {
  Matrix<Rational> m{{Rational(1, 2), Rational(1, 3)}, {Rational(1, 2), Rational(2, 3)}};
  CHECK_FALSE(sperner_submatrix(CopeMatrix(m, {2})));
}

TEST_CASE("tampered witnesses are rejected") {
  auto c = spekkens();
  auto w = sperner_submatrix(c);
  REQUIRE(w);
  CHECK(sperner_submatrix(identity_cope(4))->m == 2);
  auto bad = *w;
  bad.row_indices[0] = bad.row_indices[1];
  CHECK_FALSE(is_sperner_witness(c, bad));
}

TEST_CASE("qubit witness") {
  auto c = discrete_qubit(generic_directions(5), true);
  auto w = sperner_submatrix(c);
  REQUIRE(w);
  CHECK(w->m == 10);
  CHECK(w->factor_span_lower_bound == 5);
  CHECK(is_sperner_witness(c, *w));
}
