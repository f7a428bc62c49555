#include "copekit/theories.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "copekit/factorizer.hpp"

namespace copekit {

namespace {

Rational q(long num, long den = 1) { return make_rational(num, den); }

Matrix<Rational> rationals(std::initializer_list<std::initializer_list<long>> rows, long den = 1) {
  std::vector<std::vector<Rational>> out;
  for (const auto& r : rows) {
    std::vector<Rational> v;
    for (long x : r) v.push_back(q(x, den));
    out.push_back(std::move(v));
  }
  return Matrix<Rational>::from_rows(out);
}

std::vector<Rational> rational_ones(std::size_t n) { return std::vector<Rational>(n, Rational(1)); }

ModelFactorization exact_model(ModelKind kind, const CopeMatrix& c, Matrix<Rational> effects, Matrix<Rational> states) {
  const std::size_t k = effects.cols();
  return make_model(kind, c.block_sizes(), std::move(effects), std::move(states), rational_ones(k), 0.0);
}

ModelFactorization float_model(ModelKind kind, const CopeMatrix& c, Matrix<double> effects, Matrix<double> states,
                               std::vector<double> unit) {
  return make_model(kind, c.block_sizes(), std::move(effects), std::move(states), std::move(unit), kDefaultEps);
}

std::vector<ModelFactorization> spekkens_models() {
  const CopeMatrix c = spekkens();
  const double s2 = 1.0 / std::sqrt(2.0), s6 = 1.0 / std::sqrt(6.0), s15 = std::sqrt(1.5);
  std::vector<ModelFactorization> out;

  // SVD-based preGPT and its GPT truncation.
  Matrix<double> u{{s6, 0, 0, -s2, 1, -1},  {s6, 0, 0, s2, -1, 1}, {s6, 0, -s2, 0, 1, -1},
                   {s6, 0, s2, 0, -1, 1},   {s6, -s2, 0, 0, 1, -1}, {s6, s2, 0, 0, -1, 1}};
  Matrix<double> b{{s15, s15, s15, s15, s15, s15}, {0, 0, 0, 0, -s2, s2}, {0, 0, -s2, s2, 0, 0},
                   {-s2, s2, 0, 0, 0, 0},         {0, 0, 0, 0, 0, 0},    {0, 0, 0, 0, 0, 0}};
  const double unit0 = std::sqrt(2.0 / 3.0);
  out.push_back(float_model(ModelKind::PreGPT, c, u, b, {unit0, 0, 0, 0, 0, 0}));
  const std::vector<std::size_t> four{0, 1, 2, 3};
  out.push_back(float_model(ModelKind::GPT, c, u.select_cols(four), b.select_rows(four), {unit0, 0, 0, 0}));

  // Trivial model.
  out.push_back(exact_model(ModelKind::Ontological, c, c.exact(), Matrix<Rational>::identity(6)));

  // Noncontextual model with four ontic states.
  Matrix<Rational> r = rationals({{1, 0, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}});
  Matrix<Rational> p = rationals({{1, 0, 0, 1, 1, 0}, {0, 1, 0, 1, 0, 1}, {0, 1, 1, 0, 1, 0}, {1, 0, 1, 0, 0, 1}}, 2);
  out.push_back(exact_model(ModelKind::NoncontextualOntological, c, r, p));

  // Quasiprobabilistic model.
  Matrix<Rational> mq = rationals({{2, 1, 1, 1}, {0, 1, 1, 1}, {1, 2, 1, 1}, {1, 0, 1, 1}, {1, 1, 2, 0}, {1, 1, 0, 2}}, 2);
  Matrix<Rational> sq = rationals({{1, -1, 0, 0, 0, 0}, {0, 0, 1, -1, 0, 0}, {0, 1, 0, 1, 1, 0}, {0, 1, 0, 1, 0, 1}});
  out.push_back(exact_model(ModelKind::Quasiprobabilistic, c, mq, sq));
  return out;
}

std::vector<ModelFactorization> boxworld_models() {
  const CopeMatrix c = boxworld();
  std::vector<ModelFactorization> out;
  const Matrix<Rational> u = rationals({{1, 1, -1, -1}, {1, -1, 1, 1}, {1, -1, -1, -1}, {1, 1, 1, 1}}, 2);
  const Matrix<Rational> b = rationals({{1, 1, 1, 1}, {0, 0, -1, 1}, {-1, 1, 0, 0}, {0, 0, 0, 0}});
  out.push_back(make_model(ModelKind::PreGPT, c.block_sizes(), u, b, std::vector<Rational>{1, 0, 0, 0}, 0.0));

  const std::vector<std::size_t> three{0, 1, 2};
  auto g = make_model(ModelKind::GPT, c.block_sizes(), u.select_cols(three), b.select_rows(three),
                      std::vector<Rational>{1, 0, 0}, 0.0);
  out.push_back(g);
  out.push_back(exact_model(ModelKind::Ontological, c, c.exact(), Matrix<Rational>::identity(4)));

  const Matrix<Rational> mq = rationals({{1, 2, 0}, {1, 0, 2}, {1, 0, 0}, {1, 2, 2}}, 2);
  const Matrix<Rational> sq = rationals({{2, 0, 2, 0}, {0, 0, -1, 1}, {-1, 1, 0, 0}});
  out.push_back(exact_model(ModelKind::Quasiprobabilistic, c, mq, sq));
  return out;
}

std::vector<ModelFactorization> extended_boxworld_models() {
  const CopeMatrix c = extended_boxworld();
  const double s2 = 1.0 / std::sqrt(2.0), r2 = std::sqrt(2.0);
  std::vector<ModelFactorization> out;

  Matrix<double> u{{s2, 0, 0, 0, 0, s2},       {0, 0.5, 0.5, -0.5, 0.5, 0}, {0, 0.5, -0.5, 0.5, 0.5, 0},
                   {s2, 0, 0, 0, 0, s2},       {0, 0.5, -0.5, -0.5, 0.5, 0}, {0, 0.5, 0.5, 0.5, 0.5, 0}};
  Matrix<double> b{{0, 0, 0, 0, r2, r2}, {1, 1, 1, 1, 0, 0}, {0, 0, -1, 1, 0, 0},
                   {-1, 1, 0, 0, 0, 0},  {0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0}};
  out.push_back(float_model(ModelKind::PreGPT, c, u, b, {s2, 1, 0, 0, 1, s2}));

  // Kernel columns rearranged so the fifth state direction is used.
  Matrix<double> u2{{s2, 0, 0, 0, 0, 0},  {0, 0.5, 0.5, -0.5, 0, 0}, {0, 0.5, -0.5, 0.5, 0, 1},
                    {s2, 0, 0, 0, 0, 1},  {0, 0.5, -0.5, -0.5, 0, 0}, {0, 0.5, 0.5, 0.5, 0, 0}};
  Matrix<double> b2 = b;
  b2(4, 4) = 1.0;
  out.push_back(float_model(ModelKind::PreGPT, c, u2, b2, {s2, 1, 0, 0, 0, 1}));

  const std::vector<std::size_t> four{0, 1, 2, 3};
  out.push_back(float_model(ModelKind::GPT, c, u.select_cols(four), b.select_rows(four), {s2, 1, 0, 0}));

  const Matrix<Rational> mq = rationals({{0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 0}});
  const Matrix<Rational> sq = rationals({{1, 0, 0, 1, 0, 0}, {0, 1, 0, 1, 0, 0}, {0, 0, 1, -1, 0, 0}, {0, 0, 0, 0, 1, 1}});
  out.push_back(exact_model(ModelKind::Quasiprobabilistic, c, mq, sq));

  // Five ontic states: the quotient's distinct columns, with the equivalent
  // fifth and sixth preparations sharing one.
  const Matrix<Rational> w = rationals({{0, 0, 0, 0, 1}, {1, 0, 0, 1, 0}, {0, 1, 1, 0, 0}, {0, 0, 0, 0, 1}, {1, 0, 1, 0, 0}, {0, 1, 0, 1, 0}});
  const Matrix<Rational> h = rationals({{1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}, {0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 1, 1}});
  out.push_back(exact_model(ModelKind::Ontological, c, w, h));

  out.push_back(exact_model(ModelKind::Ontological, c, c.exact(), Matrix<Rational>::identity(6)));

  // Seven ontic states: an extra response function that is never occupied.
  Matrix<Rational> w7(6, 7);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) w7(i, j) = c.exact()(i, j);
  w7(2, 6) = 1;
  w7(3, 6) = 1;
  Matrix<Rational> h7(7, 6);
  for (std::size_t j = 0; j < 6; ++j) h7(j, j) = 1;
  out.push_back(exact_model(ModelKind::Ontological, c, w7, h7));
  return out;
}

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

}  // namespace

CopeMatrix spekkens() {
  Matrix<Rational> m = rationals(
      {{2, 0, 1, 1, 1, 1}, {0, 2, 1, 1, 1, 1}, {1, 1, 2, 0, 1, 1}, {1, 1, 0, 2, 1, 1}, {1, 1, 1, 1, 2, 0}, {1, 1, 1, 1, 0, 2}},
      2);
  CopeMatrix c(std::move(m), {2, 2, 2});
  c.set_labels({"+x", "-x", "+y", "-y", "+z", "-z"}, {"X", "Y", "Z"}, {{"+", "-"}, {"+", "-"}, {"+", "-"}});
  return c;
}

CopeMatrix boxworld() {
  return CopeMatrix(rationals({{1, 0, 0, 1}, {0, 1, 1, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}}), {2, 2});
}

CopeMatrix extended_boxworld() {
  return CopeMatrix(
      rationals({{0, 0, 0, 0, 1, 1}, {1, 0, 0, 1, 0, 0}, {0, 1, 1, 0, 0, 0}, {0, 0, 0, 0, 1, 1}, {1, 0, 1, 0, 0, 0}, {0, 1, 0, 1, 0, 0}}),
      {3, 3});
}

std::vector<ModelFactorization> reference_models(std::string_view theory) {
  if (theory == "spekkens") return spekkens_models();
  if (theory == "boxworld") return boxworld_models();
  if (theory == "extended_boxworld" || theory == "extended-boxworld") return extended_boxworld_models();
  throw PreconditionError("no reference models for theory '" + std::string(theory) + "'");
}

BlochDirection BlochDirection::normalized(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0)) throw PreconditionError("zero Bloch vector");
  return {x / n, y / n, z / n};
}

CopeMatrix discrete_qubit(const std::vector<BlochDirection>& directions, bool include_antipodes, double eps) {
  if (directions.empty()) throw PreconditionError("need at least one direction");
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const auto& d = directions[i];
    if (std::abs(d.dot(d) - 1.0) > 1e-9) throw PreconditionError("direction " + std::to_string(i) + " is not a unit vector");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(std::abs(d.dot(directions[j])) - 1.0) <= 1e-12)
        throw PreconditionError("directions " + std::to_string(j) + " and " + std::to_string(i) + " are parallel");
  }
  std::vector<BlochDirection> preps;
  std::vector<std::string> prep_labels;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const auto& d = directions[i];
    preps.push_back(d);
    prep_labels.push_back("+v" + std::to_string(i + 1));
    if (include_antipodes) {
      preps.push_back({-d.x, -d.y, -d.z});
      prep_labels.push_back("-v" + std::to_string(i + 1));
    }
  }
  Matrix<double> m(2 * directions.size(), preps.size());
  std::vector<std::string> meas;
  std::vector<std::vector<std::string>> outcomes;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    for (std::size_t j = 0; j < preps.size(); ++j) {
      const double c = directions[i].dot(preps[j]);
      m(2 * i, j) = (1.0 + c) / 2.0;
      m(2 * i + 1, j) = (1.0 - c) / 2.0;
    }
    meas.push_back("D" + std::to_string(i + 1));
    outcomes.push_back({"+", "-"});
  }
  CopeMatrix out(std::move(m), std::vector<std::size_t>(directions.size(), 2), eps);
  out.set_labels(std::move(prep_labels), std::move(meas), std::move(outcomes));
  return out;
}

std::vector<BlochDirection> generic_directions(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<BlochDirection> out;
  while (out.size() < count) {
    const double z = 2.0 * uniform01(gen) - 1.0;
    const double phi = 2.0 * std::numbers::pi * uniform01(gen);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    BlochDirection d{rho * std::cos(phi), rho * std::sin(phi), z};
    bool fresh = true;
    for (const auto& o : out)
      if (std::abs(std::abs(d.dot(o)) - 1.0) <= 1e-6) fresh = false;
    if (fresh) out.push_back(d);
  }
  return out;
}

std::vector<BlochDirection> cardinal_directions() { return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}; }

}  // namespace copekit
