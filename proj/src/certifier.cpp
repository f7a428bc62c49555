#include "copekit/certifier.hpp"

#include <algorithm>
#include <chrono>

#include "copekit/lp.hpp"

namespace copekit {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Noncontextual: return "Noncontextual";
    case Verdict::Contextual: return "Contextual";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

Verdict parse_verdict(std::string_view name) {
  for (auto v : {Verdict::Noncontextual, Verdict::Contextual, Verdict::Undetermined})
    if (to_string(v) == name) return v;
  throw PreconditionError("unknown verdict '" + std::string(name) + "'");
}

std::string_view evidence_kind(const Evidence& e) {
  struct {
    std::string_view operator()(const NoEvidence&) const { return "None"; }
    std::string_view operator()(const EnmfModel&) const { return "EnmfModel"; }
    std::string_view operator()(const VertexForcing&) const { return "VertexForcing"; }
    std::string_view operator()(const SpernerSeparation&) const { return "SpernerSeparation"; }
    std::string_view operator()(const ExhaustiveAbsence&) const { return "ExhaustiveAbsence"; }
  } name;
  return std::visit(name, e);
}

std::optional<VertexForcing> vertex_forcing_certificate(const CopeMatrix& c) {
  if (!c.is_exact()) throw PreconditionError("vertex forcing needs the rational backend");
  const CopeMatrix merged = c.num_measurements() == 1 ? c : merge_measurements(c);
  VertexForcing vf;
  vf.polytope = span_simplex_polytope(merged);
  const auto& m = merged.exact();
  for (const auto& v : vf.polytope.vertices) {
    bool found = false;
    for (std::size_t j = 0; j < m.cols() && !found; ++j) found = m.col(j) == v;
    if (!found) return std::nullopt;
  }
  const std::size_t r = rank(merged);
  if (vf.polytope.vertices.size() <= r) return std::nullopt;
  vf.forced_rank = vf.polytope.vertices.size();
  return vf;
}

ExhaustiveDecision exhaustive_enmf_decision(const CopeMatrix& c, std::size_t k) {
  require_valid(c);
  if (!c.is_exact()) throw PreconditionError("exhaustive decision needs the rational backend");
  const std::size_t size = c.num_rows() + c.num_preparations();
  if (size > kExhaustiveMaxSize)
    throw GuardExceeded("rows + columns = " + std::to_string(size) + " exceeds " + std::to_string(kExhaustiveMaxSize));
  if (k > kExhaustiveMaxK)
    throw GuardExceeded("k = " + std::to_string(k) + " exceeds " + std::to_string(kExhaustiveMaxK));

  ExhaustiveDecision out;
  out.log.k = k;
  out.log.vertex_count = response_vertices(c).size();
  out.log.candidates = response_candidates(c);
  const auto& verts = out.log.candidates;
  // Fewer than rank(C) response functions can never reproduce C.
  if (k < rank(c)) return out;
  // Larger supersets only add unused columns.
  const std::size_t s = std::min(k, verts.size());
  std::vector<std::size_t> pick(s);
  for (std::size_t i = 0; i < s; ++i) pick[i] = i;
  while (true) {
    Matrix<Rational> r(c.num_rows(), s);
    for (std::size_t l = 0; l < s; ++l)
      for (std::size_t i = 0; i < c.num_rows(); ++i) r(i, l) = verts[pick[l]][i];
    if (auto m = complete_with_states(c, r, true)) {
      out.model = std::move(m);
      return out;
    }
    out.log.rejected_patterns.push_back(pick);
    std::size_t i = s;
    while (i > 0 && pick[i - 1] == verts.size() - s + i - 1) --i;
    if (i == 0) return out;
    ++pick[i - 1];
    for (std::size_t j = i; j < s; ++j) pick[j] = pick[j - 1] + 1;
  }
}

namespace {

bool verify_vertex_forcing(const CopeMatrix& c, const VertexForcing& vf) {
  if (!c.is_exact()) return false;
  auto fresh = vertex_forcing_certificate(c);
  return fresh && fresh->polytope.vertices == vf.polytope.vertices && fresh->forced_rank == vf.forced_rank &&
         vf.forced_rank > rank(c);
}

}  // namespace

bool verify_certificate(const Certificate& cert) {
  const CopeMatrix& c = cert.matrix;
  if (!validate(c).empty()) return false;
  if (cert.rank != rank(c)) return false;
  return std::visit(
      [&](const auto& ev) -> bool {
        using E = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<E, EnmfModel>) {
          return cert.verdict == Verdict::Noncontextual &&
                 classify_model(c, ev.model).satisfies(ModelKind::NoncontextualOntological);
        } else if constexpr (std::is_same_v<E, VertexForcing>) {
          return cert.verdict == Verdict::Contextual && verify_vertex_forcing(c, ev);
        } else if constexpr (std::is_same_v<E, SpernerSeparation>) {
          return cert.verdict == Verdict::Contextual && ev.rank == cert.rank && is_sperner_witness(c, ev.witness) &&
                 ev.witness.factor_span_lower_bound == sperner_span_bound(ev.witness.m) &&
                 ev.witness.factor_span_lower_bound > cert.rank;
        } else if constexpr (std::is_same_v<E, ExhaustiveAbsence>) {
          if (cert.verdict != Verdict::Contextual || !c.is_exact()) return false;
          auto again = exhaustive_enmf_decision(c, ev.log.k);
          return !again.exists() && ev.log.k >= again.log.vertex_count &&
                 again.log.candidates == ev.log.candidates &&
                 again.log.rejected_patterns == ev.log.rejected_patterns;
        } else {
          return cert.verdict == Verdict::Undetermined;
        }
      },
      cert.evidence);
}

Certificate certify(const CopeMatrix& c, const NmfOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  require_valid(c);
  Certificate cert{c, Verdict::Undetermined, NoEvidence{}, 0, 0, 0, 0.0, {}};
  cert.rank = rank(c);
  cert.metadata["sperner_reading"] =
      "witnesses must satisfy the unique-zero condition on rows and on columns; for square "
      "selections the column-only condition already implies the row condition";
  auto finish = [&](Certificate& out) -> Certificate {
    out.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return std::move(out);
  };

  // (1) heuristic and vertex-seeded ENMF search.
  NmfOptions o = opts;
  o.inner_dim = std::max<std::size_t>(1, cert.rank);
  const EnmfSearch search = enmf_search(c, o);
  cert.searched_k_first = search.k_first;
  cert.searched_k_last = search.k_last;
  if (search.model && classify_model(c, *search.model).satisfies(ModelKind::NoncontextualOntological)) {
    cert.verdict = Verdict::Noncontextual;
    cert.evidence = EnmfModel{*search.model};
    return finish(cert);
  }

  // (2) nested-polytope vertex forcing.
  std::optional<std::size_t> vertex_count;
  if (c.is_exact() && c.num_rows() <= 64) {
    if (auto vf = vertex_forcing_certificate(c)) {
      cert.verdict = Verdict::Contextual;
      cert.evidence = std::move(*vf);
      return finish(cert);
    }
    vertex_count = response_vertices(c).size();
  }

  // (3) Sperner rank separation.
  if (auto w = sperner_submatrix(c); w && w->factor_span_lower_bound > cert.rank) {
    cert.verdict = Verdict::Contextual;
    cert.evidence = SpernerSeparation{*w, cert.rank};
    return finish(cert);
  }

  // (4) exhaustive decision at k = |vertices(Q)|, which is complete.
  if (vertex_count && c.num_rows() + c.num_preparations() <= kExhaustiveMaxSize && *vertex_count <= kExhaustiveMaxK) {
    auto d = exhaustive_enmf_decision(c, *vertex_count);
    if (d.exists() && classify_model(c, *d.model).satisfies(ModelKind::NoncontextualOntological)) {
      cert.verdict = Verdict::Noncontextual;
      cert.evidence = EnmfModel{*d.model};
    } else {
      cert.verdict = Verdict::Contextual;
      cert.evidence = ExhaustiveAbsence{std::move(d.log)};
    }
    return finish(cert);
  }

  cert.verdict = Verdict::Undetermined;
  cert.evidence = NoEvidence{};
  cert.metadata["undetermined_reason"] =
      "no equirank factorization found for k in the searched range and no contextuality witness applied";
  return finish(cert);
}

}  // namespace copekit
