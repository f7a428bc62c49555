#include <doctest.h>

#include <random>

#include "copekit/factorizer.hpp"
#include "copekit/theories.hpp"
#include "oracles.hpp"

using namespace copekit;

TEST_CASE("pregpt reconstructs with a shared unit") {
  for (const auto& c : {spekkens(), boxworld(), extended_boxworld()}) {
    auto m = pregpt_from_svd(c);
    CHECK(m.kind == ModelKind::PreGPT);
    CHECK(m.inner_dim() == c.num_rows());
    auto chk = oracle::check_model(c, m, 1e-9);
    CHECK(chk.reconstructs);
    CHECK(chk.common_unit);
    CHECK(classify_model(c, m).satisfies(ModelKind::PreGPT));
  }
}

TEST_CASE("gpt is equirank") {
  auto c = spekkens();
  auto g = gpt(c);
  CHECK(g.is_exact());
  CHECK(g.inner_dim() == 4);
  auto chk = oracle::check_model(c, g);
  CHECK(chk.reconstructs);
  CHECK(chk.unit_all_ones);
  CHECK(chk.rank_effects == 4);
  CHECK(chk.rank_states == 4);

  auto gf = gpt(c.as_float());
  CHECK(gf.inner_dim() == 4);
  CHECK(oracle::check_model(c, gf, 1e-9).reconstructs);
  CHECK(classify_model(c.as_float(), gf).satisfies(ModelKind::GPT));
}

TEST_CASE("quasiprobabilistic models from tomographic columns") {
  auto c = spekkens();
  auto g = gpt(c);
  std::vector<std::size_t> tom{0, 2, 4, 1};
  auto q = quasi_from_gpt(g, tom);
  auto chk = oracle::check_model(c, q);
  CHECK(chk.reconstructs);
  CHECK(chk.unit_all_ones);
  CHECK(classify_model(c, q).satisfies(ModelKind::Quasiprobabilistic));
  // states of the tomographic preparations become the standard basis
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t s = 0; s < 4; ++s) CHECK(q.exact().states(s, tom[t]) == (s == t ? 1 : 0));

  // 0, 1 and 2, 3 both sum to the same state, so the first four are dependent
  std::vector<std::size_t> dependent{0, 1, 2, 3};
  CHECK_THROWS_AS(quasi_from_gpt(g, dependent), PreconditionError);
  std::vector<std::size_t> short_tom{0, 2};
  CHECK_THROWS_AS(quasi_from_gpt(g, short_tom), PreconditionError);
}

TEST_CASE("trivial ontological model") {
  auto c = boxworld();
  auto t = trivial_ontological(c);
  CHECK(t.exact().effects == c.exact());
  CHECK(t.exact().states == Matrix<Rational>::identity(4));
  CHECK(classify_model(c, t).satisfies(ModelKind::Ontological));
  CHECK_FALSE(classify_model(c, t).satisfies(ModelKind::NoncontextualOntological));
  CHECK(gpt_to_trivial_ontological(gpt(c), c) == t);
  CHECK_THROWS_AS(gpt_to_trivial_ontological(gpt(spekkens()), c), PreconditionError);
}

TEST_CASE("fiducial tomography") {
  auto s = fiducial_tomography_test(spekkens());
  CHECK(s.states_fiducial);
  CHECK(s.effects_fiducial);
  auto b = fiducial_tomography_test(boxworld());
  CHECK(b.states_fiducial);   // 4 > 3
  CHECK(b.effects_fiducial);  // 4 distinct rows > 3
  auto i = fiducial_tomography_test(identity_cope(3));
  CHECK_FALSE(i.states_fiducial);
  CHECK_FALSE(i.effects_fiducial);
}

TEST_CASE("nmf returns only verified nonnegative models") {
  NmfOptions o;
  o.inner_dim = 4;
  auto m = nmf(spekkens(), o);
  REQUIRE(m);
  auto chk = oracle::check_model(spekkens(), *m);
  CHECK(chk.reconstructs);
  CHECK(chk.nonnegative);
  CHECK(chk.states_stochastic);
  CHECK(chk.unit_all_ones);

  o.inner_dim = 3;  // below rank
  CHECK_FALSE(nmf(spekkens(), o));

  o.inner_dim = 8;  // padded trivial model
  auto big = nmf(boxworld(), o);
  REQUIRE(big);
  CHECK(big->inner_dim() == 8);
  CHECK(classify_model(boxworld(), *big).satisfies(ModelKind::Ontological));

  o.inner_dim = 0;
  CHECK_THROWS_AS(check_options(o), PreconditionError);
}

TEST_CASE("float nmf heuristic") {
  NmfOptions o;
  o.inner_dim = 4;
  o.seed = 3;
  auto c = spekkens().as_float();
  auto m = nmf(c, o);
  REQUIRE(m);
  auto chk = oracle::check_model(c, *m, 1e-6);
  CHECK(chk.reconstructs);
  CHECK(chk.nonnegative);
  CHECK(chk.states_stochastic);
}

TEST_CASE("enmf search") {
  NmfOptions o;
  auto s = enmf_search(spekkens(), o);
  REQUIRE(s.model);
  CHECK(s.k_first == 4);
  CHECK(s.model->kind == ModelKind::NoncontextualOntological);
  auto chk = oracle::check_model(spekkens(), *s.model);
  CHECK(chk.rank_effects == 4);
  CHECK(chk.rank_states == 4);
  CHECK(chk.nonnegative);

  CHECK_FALSE(enmf(boxworld(), o));
  o.max_inner_dim = 40;
  CHECK_THROWS_AS(enmf_search(spekkens(), o), GuardExceeded);
}

TEST_CASE("complete_with_states") {
  // the four vertices of the boxworld square complete, but never equirank
  auto c = boxworld();
  auto r = c.exact();
  auto m = complete_with_states(c, r, false);
  REQUIRE(m);
  CHECK(classify_model(c, *m).satisfies(ModelKind::Ontological));
  CHECK_FALSE(complete_with_states(c, r, true));
}

TEST_CASE("restart threads honour the option") {
  NmfOptions o;
  o.threads = 3;
  CHECK(restart_threads(o) == 3);
}
