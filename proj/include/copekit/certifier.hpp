#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "copekit/factorizer.hpp"
#include "copekit/polytope.hpp"
#include "copekit/sperner.hpp"

namespace copekit {

enum class Verdict { Noncontextual, Contextual, Undetermined };

std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view name);

struct EnmfModel {
  ModelFactorization model;
};

/// Q has every vertex among the columns of C and more vertices than rank(C).
/// Any equirank R must then contain each vertex as a column, and the vertex
/// columns of C force disjointly supported states, so rank P >= forced_rank.
struct VertexForcing {
  SpanSimplexPolytope polytope;
  std::size_t forced_rank = 0;
};

struct SpernerSeparation {
  SpernerWitness witness;
  std::size_t rank = 0;
};

/// Search over response-function supports: each pattern is a set of indices
/// into the candidates (vertices of Q rescaled to unit block sums, plus the
/// columns of C), completed by an exact LP.
struct ExhaustiveLog {
  std::size_t k = 0;
  std::size_t vertex_count = 0;
  std::vector<std::vector<Rational>> candidates;
  std::vector<std::vector<std::size_t>> rejected_patterns;
};

struct ExhaustiveAbsence {
  ExhaustiveLog log;
};

struct NoEvidence {};

using Evidence = std::variant<NoEvidence, EnmfModel, VertexForcing, SpernerSeparation, ExhaustiveAbsence>;

std::string_view evidence_kind(const Evidence& e);

struct Certificate {
  CopeMatrix matrix;
  Verdict verdict = Verdict::Undetermined;
  Evidence evidence;
  std::size_t rank = 0;
  std::size_t searched_k_first = 0;
  std::size_t searched_k_last = 0;
  double wall_time_ms = 0.0;
  std::map<std::string, std::string> metadata;
};

/// Independently re-checks the evidence against the embedded matrix.
bool verify_certificate(const Certificate& cert);

/// Expects an exact matrix; multi-block input is merged first.
std::optional<VertexForcing> vertex_forcing_certificate(const CopeMatrix& c);

struct ExhaustiveDecision {
  std::optional<ModelFactorization> model;  // set when an ENMF was found
  ExhaustiveLog log;
  bool exists() const { return model.has_value(); }
};

/// Exact search for an equirank nonnegative factorization with at most k
/// response functions drawn from the candidates. Every response function of
/// an equirank model lies in Q, a convex combination of its vertices, so at
/// k >= |vertices(Q)| the answer decides ENMF existence outright; below that
/// a rejection only rules out models supported on the candidates.
/// Requires the rational backend, rows + cols <= 10 and k <= 5 (GuardExceeded).
ExhaustiveDecision exhaustive_enmf_decision(const CopeMatrix& c, std::size_t k);

inline constexpr std::size_t kExhaustiveMaxSize = 10;
inline constexpr std::size_t kExhaustiveMaxK = 5;

/// Tiered pipeline: ENMF search, vertex forcing, Sperner rank separation,
/// then the exhaustive decision when it fits its guards.
Certificate certify(const CopeMatrix& c, const NmfOptions& opts);

}  // namespace copekit
