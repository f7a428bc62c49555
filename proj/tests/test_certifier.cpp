#include <doctest.h>

#include "copekit/certifier.hpp"
#include "copekit/theories.hpp"
#include "fixtures.hpp"

using namespace copekit;

TEST_CASE("vertex forcing on boxworld") {
  auto vf = vertex_forcing_certificate(boxworld());
  REQUIRE(vf);
  CHECK(vf->forced_rank == 4);
  CHECK(vf->polytope.vertices.size() == 4);
  CHECK_FALSE(vertex_forcing_certificate(spekkens()));  // vertices are not columns
}

TEST_CASE("certify verdicts") {
  NmfOptions o;
  auto b = certify(boxworld(), o);
  CHECK(b.verdict == Verdict::Contextual);
  CHECK(evidence_kind(b.evidence) == "VertexForcing");
  CHECK(b.rank == 3);
  CHECK(verify_certificate(b));

  auto s = certify(spekkens(), o);
  CHECK(s.verdict == Verdict::Noncontextual);
  CHECK(evidence_kind(s.evidence) == "EnmfModel");
  CHECK(verify_certificate(s));

  auto u = certify(boxworld().as_float(), o);
  CHECK(u.verdict == Verdict::Undetermined);
  CHECK(u.metadata.count("undetermined_reason") == 1);
}

TEST_CASE("tampered certificates fail verification") {
  NmfOptions o;
  auto b = certify(boxworld(), o);
  auto forged = b;
  std::get<VertexForcing>(forged.evidence).forced_rank = 2;
  CHECK_FALSE(verify_certificate(forged));

  auto flipped = b;
  flipped.verdict = Verdict::Noncontextual;
  CHECK_FALSE(verify_certificate(flipped));

  auto s = certify(spekkens(), o);
  auto other = s;
  other.matrix = boxworld();
  CHECK_FALSE(verify_certificate(other));
}

TEST_CASE("exhaustive decision") {
  auto bw = exhaustive_enmf_decision(boxworld(), 3);
  CHECK_FALSE(bw.exists());
  CHECK(bw.log.vertex_count == 4);
  CHECK_FALSE(bw.log.rejected_patterns.empty());

  CopeMatrix a1(fixtures::fragment_a1(), {2, 2});
  CHECK(rank(a1) == 3);
  CHECK_FALSE(exhaustive_enmf_decision(a1, 3).exists());

  auto id = exhaustive_enmf_decision(identity_cope(3), 3);
  REQUIRE(id.exists());
  CHECK(classify_model(identity_cope(3), *id.model).satisfies(ModelKind::NoncontextualOntological));

  CHECK_FALSE(exhaustive_enmf_decision(boxworld(), 2).exists());  // below rank
  CHECK_THROWS_AS(exhaustive_enmf_decision(spekkens(), 4), GuardExceeded);
  CHECK_THROWS_AS(exhaustive_enmf_decision(boxworld(), 6), GuardExceeded);
  CHECK_THROWS_AS(exhaustive_enmf_decision(boxworld().as_float(), 3), PreconditionError);
}

TEST_CASE("verdict names") {
  for (auto v : {Verdict::Noncontextual, Verdict::Contextual, Verdict::Undetermined})
    CHECK(parse_verdict(to_string(v)) == v);
  CHECK_THROWS(parse_verdict("maybe"));
}
