#include <doctest.h>

#include <random>

#include "copekit/linalg.hpp"
#include "copekit/lp.hpp"
#include "oracles.hpp"

using namespace copekit;

namespace {

Matrix<Rational> random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<long> num(-3, 3), den(1, 4);
  Matrix<Rational> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = make_rational(num(rng), den(rng));
  return m;
}

// rank-deficient on purpose: last rows are combinations of the first ones
Matrix<Rational> low_rank(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t r) {
  auto a = random_matrix(rng, rows, r);
  auto b = random_matrix(rng, r, cols);
  return a * b;
}

}  // namespace

TEST_CASE("rational text form") {
  CHECK(to_string(make_rational(2, 4)) == "1/2");
  CHECK(to_string(make_rational(-6, 3)) == "-2");
  CHECK(parse_rational("3/9") == make_rational(1, 3));
  CHECK(parse_rational("0.25") == make_rational(1, 4));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("snap_to_rational") {
  Rational q;
  CHECK(snap_to_rational(1.0 / 3.0 + 1e-12, 1e-9, 100, q));
  CHECK(q == make_rational(1, 3));
  CHECK_FALSE(snap_to_rational(0.123456789, 1e-12, 10, q));
}

TEST_CASE("exact rank agrees with plain elimination") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    std::size_t r = 1 + rng() % std::min(rows, cols);
    auto m = trial % 2 ? random_matrix(rng, rows, cols) : low_rank(rng, rows, cols, r);
    CHECK(rank(m) == oracle::rank(m));
  }
}

TEST_CASE("float rank uses a relative cutoff") {
  Matrix<double> m{{1.0, 2.0}, {2.0, 4.0 + 1e-13}};
  CHECK(rank(m, 1e-9) == 1);
  CHECK(rank(Matrix<double>{{1.0, 0.0}, {0.0, 1e-3}}, 1e-9) == 2);
}

TEST_CASE("kernel basis, inverse and rank factorization") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = low_rank(rng, 5, 6, 1 + trial % 4);
    const auto z = kernel_basis(m);
    CHECK(z.cols() == m.cols() - oracle::rank(m));
    const auto prod = m * z;
    for (std::size_t i = 0; i < prod.rows(); ++i)
      for (std::size_t j = 0; j < prod.cols(); ++j) CHECK(prod(i, j) == 0);

    auto f = rank_factorization(m);
    CHECK(f.left * f.right == m);
    CHECK(f.left.cols() == oracle::rank(m));
  }
  Matrix<Rational> a{{2, 1}, {1, 1}};
  auto inv = inverse(a);
  REQUIRE(inv);
  CHECK(a * *inv == Matrix<Rational>::identity(2));
  CHECK_FALSE(inverse(Matrix<Rational>{{1, 2}, {2, 4}}));
}

TEST_CASE("nonnegative solutions") {
  Matrix<Rational> a{{1, 1, 0}, {0, 1, 1}};
  auto x = find_nonneg_solution(a, std::vector<Rational>{1, 1});
  REQUIRE(x);
  CHECK((*x)[0] + (*x)[1] == 1);
  CHECK((*x)[1] + (*x)[2] == 1);
  for (auto& v : *x) CHECK(v >= 0);
  CHECK_FALSE(find_nonneg_solution(a, std::vector<Rational>{-1, 1}));

  std::vector<std::vector<Rational>> pts{{1, 0}, {0, 1}};
  CHECK(in_convex_hull(pts, std::vector<Rational>{make_rational(1, 3), make_rational(2, 3)}));
  CHECK_FALSE(in_convex_hull(pts, std::vector<Rational>{make_rational(1, 2), make_rational(1, 3)}));
}
