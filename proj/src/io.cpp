#include "copekit/io.hpp"

#include <json.hpp>

namespace copekit {

using nlohmann::json;

namespace {

json entry(const Rational& x) { return to_string(x); }
json entry(double x) { return x; }

template <class T>
json matrix_json(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(entry(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
json vector_json(const std::vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(entry(x));
  return out;
}

json cope_json(const CopeMatrix& c) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["backend"] = c.is_exact() ? "rational" : "float";
  if (!c.is_exact()) doc["eps"] = c.eps();
  doc["preparations"] = c.preparation_labels();
  json meas = json::array();
  for (std::size_t b = 0; b < c.num_measurements(); ++b)
    meas.push_back({{"name", c.measurement_labels()[b]}, {"outcomes", c.outcome_labels()[b]}});
  doc["measurements"] = std::move(meas);
  json blocks = json::array();
  c.visit([&](const auto& m) {
    for (std::size_t b = 0; b < c.num_measurements(); ++b)
      blocks.push_back(matrix_json(m.row_block(c.block_offset(b), c.block_sizes()[b])));
  });
  doc["blocks"] = std::move(blocks);
  return doc;
}

json model_json(const ModelFactorization& m) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = to_string(m.kind);
  doc["backend"] = m.is_exact() ? "rational" : "float";
  if (!m.is_exact()) doc["eps"] = m.eps;
  doc["inner_dim"] = m.inner_dim();
  doc["block_sizes"] = m.block_sizes;
  m.visit([&](const auto& f) {
    doc["effects"] = matrix_json(f.effects);
    doc["states"] = matrix_json(f.states);
    doc["unit"] = vector_json(f.unit);
  });
  return doc;
}

// ---- reading ----

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

const json& member(const json& obj, const std::string& base, const std::string& key) {
  if (!obj.is_object()) throw ParseError(base, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(dot(base, key), "missing field");
  return *it;
}

const json& array_member(const json& obj, const std::string& base, const std::string& key) {
  const json& v = member(obj, base, key);
  if (!v.is_array()) throw ParseError(dot(base, key), "expected an array");
  return v;
}

std::size_t size_value(const json& v, const std::string& field) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ParseError(field, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::string string_value(const json& v, const std::string& field) {
  if (!v.is_string()) throw ParseError(field, "expected a string");
  return v.get<std::string>();
}

Backend backend_value(const json& doc, const std::string& base) {
  const std::string b = string_value(member(doc, base, "backend"), dot(base, "backend"));
  if (b == "rational") return Backend::Rational;
  if (b == "float") return Backend::Float;
  throw ParseError(dot(base, "backend"), "expected \"rational\" or \"float\", got \"" + b + "\"");
}

double eps_value(const json& doc, const std::string& base) {
  auto it = doc.find("eps");
  if (it == doc.end()) return kDefaultEps;
  if (!it->is_number() || it->get<double>() < 0.0) throw ParseError(dot(base, "eps"), "expected a nonnegative number");
  return it->get<double>();
}

void check_version(const json& doc, const std::string& base) {
  const std::string v = string_value(member(doc, base, "format_version"), dot(base, "format_version"));
  if (v != kFormatVersion) throw ParseError(dot(base, "format_version"), "unsupported version \"" + v + "\"");
}

template <class T>
T scalar(const json& v, const std::string& field);

template <>
Rational scalar<Rational>(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational(v.dump());
  if (!v.is_string()) throw ParseError(field, "rational entries must be strings such as \"1/3\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(field, e.what());
  }
}

template <>
double scalar<double>(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return to_double(parse_rational(v.get<std::string>()));
    } catch (const std::exception& e) {
      throw ParseError(field, e.what());
    }
  }
  throw ParseError(field, "expected a number");
}

template <class T>
Matrix<T> matrix_value(const json& v, const std::string& field, std::optional<std::size_t> rows,
                       std::optional<std::size_t> cols) {
  if (!v.is_array()) throw ParseError(field, "expected an array of rows");
  if (rows && v.size() != *rows)
    throw ParseError(field, "expected " + std::to_string(*rows) + " rows, got " + std::to_string(v.size()));
  std::size_t ncols = cols.value_or(v.empty() ? 0 : (v[0].is_array() ? v[0].size() : 0));
  Matrix<T> m(v.size(), ncols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string rf = at(field, i);
    if (!v[i].is_array()) throw ParseError(rf, "expected an array");
    if (v[i].size() != ncols)
      throw ParseError(rf, "expected " + std::to_string(ncols) + " entries, got " + std::to_string(v[i].size()));
    for (std::size_t j = 0; j < ncols; ++j) m(i, j) = scalar<T>(v[i][j], at(rf, j));
  }
  return m;
}

template <class T>
std::vector<T> vector_value(const json& v, const std::string& field, std::size_t n) {
  if (!v.is_array()) throw ParseError(field, "expected an array");
  if (v.size() != n) throw ParseError(field, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  std::vector<T> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(scalar<T>(v[i], at(field, i)));
  return out;
}

template <class T>
CopeMatrix build_cope(const json& doc, const std::string& base, const std::vector<std::size_t>& sizes,
                      std::size_t ncols, double eps) {
  const json& blocks = array_member(doc, base, "blocks");
  std::vector<Matrix<T>> mats;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    mats.push_back(matrix_value<T>(blocks[b], at(dot(base, "blocks"), b), sizes[b], ncols));
  if constexpr (std::is_same_v<T, Rational>)
    return CopeMatrix::from_blocks(mats);
  else
    return CopeMatrix::from_blocks(mats, eps);
}

CopeMatrix cope_from_json(const json& doc, const std::string& base, bool check) {
  check_version(doc, base);
  const Backend backend = backend_value(doc, base);
  const double eps = eps_value(doc, base);

  const json& preps = array_member(doc, base, "preparations");
  std::vector<std::string> prep_labels;
  for (std::size_t j = 0; j < preps.size(); ++j) prep_labels.push_back(string_value(preps[j], at(dot(base, "preparations"), j)));

  const json& meas = array_member(doc, base, "measurements");
  const json& blocks = array_member(doc, base, "blocks");
  if (meas.empty()) throw ParseError(dot(base, "measurements"), "at least one measurement is required");
  if (prep_labels.empty()) throw ParseError(dot(base, "preparations"), "at least one preparation is required");
  if (meas.size() != blocks.size())
    throw ParseError(dot(base, "blocks"), "expected " + std::to_string(meas.size()) + " blocks, got " +
                                              std::to_string(blocks.size()));
  std::vector<std::string> meas_labels;
  std::vector<std::vector<std::string>> outcome_labels;
  std::vector<std::size_t> sizes;
  for (std::size_t b = 0; b < meas.size(); ++b) {
    const std::string mf = at(dot(base, "measurements"), b);
    meas_labels.push_back(string_value(member(meas[b], mf, "name"), dot(mf, "name")));
    const json& outs = array_member(meas[b], mf, "outcomes");
    if (outs.empty()) throw ParseError(dot(mf, "outcomes"), "a measurement needs at least one outcome");
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < outs.size(); ++k) labels.push_back(string_value(outs[k], at(dot(mf, "outcomes"), k)));
    sizes.push_back(labels.size());
    outcome_labels.push_back(std::move(labels));
  }

  CopeMatrix c = backend == Backend::Rational ? build_cope<Rational>(doc, base, sizes, prep_labels.size(), eps)
                                              : build_cope<double>(doc, base, sizes, prep_labels.size(), eps);
  c.set_labels(std::move(prep_labels), std::move(meas_labels), std::move(outcome_labels));
  if (check) {
    auto violations = validate(c);
    if (!violations.empty()) {
      const auto& v = violations.front();
      std::string field = at(dot(base, "blocks"), v.block);
      if (v.kind == Violation::Kind::EntryOutOfRange)
        field = at(at(field, v.row - c.block_offset(v.block)), v.column);
      else if (v.kind == Violation::Kind::ColumnSum)
        field += " column " + std::to_string(v.column);
      throw ParseError(field, v.message);
    }
  }
  return c;
}

template <class T>
ModelFactorization build_model(const json& doc, const std::string& base, ModelKind kind,
                               const std::vector<std::size_t>& sizes, std::size_t inner, double eps) {
  std::size_t rows = 0;
  for (auto s : sizes) rows += s;
  Matrix<T> effects = matrix_value<T>(member(doc, base, "effects"), dot(base, "effects"), rows, inner);
  Matrix<T> states = matrix_value<T>(member(doc, base, "states"), dot(base, "states"), inner, std::nullopt);
  std::vector<T> unit = vector_value<T>(member(doc, base, "unit"), dot(base, "unit"), inner);
  return make_model(kind, sizes, std::move(effects), std::move(states), std::move(unit),
                    std::is_same_v<T, Rational> ? 0.0 : eps);
}

ModelFactorization model_from_json(const json& doc, const std::string& base) {
  check_version(doc, base);
  ModelKind kind;
  try {
    kind = parse_model_kind(string_value(member(doc, base, "kind"), dot(base, "kind")));
  } catch (const PreconditionError& e) {
    throw ParseError(dot(base, "kind"), e.what());
  }
  const Backend backend = backend_value(doc, base);
  const double eps = eps_value(doc, base);
  const std::size_t inner = size_value(member(doc, base, "inner_dim"), dot(base, "inner_dim"));
  const json& bs = array_member(doc, base, "block_sizes");
  std::vector<std::size_t> sizes;
  for (std::size_t b = 0; b < bs.size(); ++b) sizes.push_back(size_value(bs[b], at(dot(base, "block_sizes"), b)));
  return backend == Backend::Rational ? build_model<Rational>(doc, base, kind, sizes, inner, eps)
                                      : build_model<double>(doc, base, kind, sizes, inner, eps);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
}

std::vector<std::size_t> index_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw ParseError(field, "expected an array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(size_value(v[i], at(field, i)));
  return out;
}

std::vector<std::vector<Rational>> rational_rows(const json& v, const std::string& field) {
  if (!v.is_array()) throw ParseError(field, "expected an array");
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array()) throw ParseError(at(field, i), "expected an array");
    std::vector<Rational> row;
    for (std::size_t j = 0; j < v[i].size(); ++j) row.push_back(scalar<Rational>(v[i][j], at(at(field, i), j)));
    out.push_back(std::move(row));
  }
  return out;
}

json rational_rows_json(const std::vector<std::vector<Rational>>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(vector_json(r));
  return out;
}

json evidence_json(const Evidence& ev) {
  return std::visit(
      [](const auto& e) -> json {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, EnmfModel>) {
          return {{"model", model_json(e.model)}};
        } else if constexpr (std::is_same_v<E, VertexForcing>) {
          return {{"forced_rank", e.forced_rank},
                  {"ambient_dim", e.polytope.ambient_dim},
                  {"basis", matrix_json(e.polytope.basis)},
                  {"vertices", rational_rows_json(e.polytope.vertices)}};
        } else if constexpr (std::is_same_v<E, SpernerSeparation>) {
          return {{"row_indices", e.witness.row_indices},
                  {"col_indices", e.witness.col_indices},
                  {"m", e.witness.m},
                  {"ontic_dim_lower_bound", e.witness.ontic_dim_lower_bound},
                  {"factor_span_lower_bound", e.witness.factor_span_lower_bound},
                  {"rank", e.rank}};
        } else if constexpr (std::is_same_v<E, ExhaustiveAbsence>) {
          json patterns = json::array();
          for (const auto& p : e.log.rejected_patterns) patterns.push_back(p);
          return {{"k", e.log.k},
                  {"vertex_count", e.log.vertex_count},
                  {"candidates", rational_rows_json(e.log.candidates)},
                  {"rejected_patterns", patterns}};
        } else {
          return json::object();
        }
      },
      ev);
}

Evidence evidence_from_json(const std::string& kind, const json& e, const std::string& base) {
  if (kind == "None") return NoEvidence{};
  if (kind == "EnmfModel") return EnmfModel{model_from_json(member(e, base, "model"), dot(base, "model"))};
  if (kind == "VertexForcing") {
    VertexForcing vf;
    vf.forced_rank = size_value(member(e, base, "forced_rank"), dot(base, "forced_rank"));
    vf.polytope.ambient_dim = size_value(member(e, base, "ambient_dim"), dot(base, "ambient_dim"));
    vf.polytope.basis = matrix_value<Rational>(member(e, base, "basis"), dot(base, "basis"), vf.polytope.ambient_dim,
                                               std::nullopt);
    vf.polytope.vertices = rational_rows(member(e, base, "vertices"), dot(base, "vertices"));
    return vf;
  }
  if (kind == "SpernerSeparation") {
    SpernerSeparation s;
    s.witness.row_indices = index_list(member(e, base, "row_indices"), dot(base, "row_indices"));
    s.witness.col_indices = index_list(member(e, base, "col_indices"), dot(base, "col_indices"));
    s.witness.m = size_value(member(e, base, "m"), dot(base, "m"));
    s.witness.ontic_dim_lower_bound = size_value(member(e, base, "ontic_dim_lower_bound"), dot(base, "ontic_dim_lower_bound"));
    s.witness.factor_span_lower_bound =
        size_value(member(e, base, "factor_span_lower_bound"), dot(base, "factor_span_lower_bound"));
    s.rank = size_value(member(e, base, "rank"), dot(base, "rank"));
    return s;
  }
  if (kind == "ExhaustiveAbsence") {
    ExhaustiveAbsence a;
    a.log.k = size_value(member(e, base, "k"), dot(base, "k"));
    a.log.vertex_count = size_value(member(e, base, "vertex_count"), dot(base, "vertex_count"));
    a.log.candidates = rational_rows(member(e, base, "candidates"), dot(base, "candidates"));
    const json& pats = array_member(e, base, "rejected_patterns");
    for (std::size_t i = 0; i < pats.size(); ++i) a.log.rejected_patterns.push_back(index_list(pats[i], at(dot(base, "rejected_patterns"), i)));
    return a;
  }
  throw ParseError("evidence_kind", "unknown evidence kind \"" + kind + "\"");
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string emit_cope(const CopeMatrix& c) { return dump(cope_json(c)); }
std::string emit_model(const ModelFactorization& m) { return dump(model_json(m)); }

std::string emit_certificate(const Certificate& cert) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["verdict"] = to_string(cert.verdict);
  doc["evidence_kind"] = evidence_kind(cert.evidence);
  doc["evidence"] = evidence_json(cert.evidence);
  doc["rank"] = cert.rank;
  doc["searched_k_range"] = {cert.searched_k_first, cert.searched_k_last};
  doc["wall_time_ms"] = cert.wall_time_ms;
  doc["metadata"] = cert.metadata;
  doc["matrix"] = cope_json(cert.matrix);
  return dump(doc);
}

CopeMatrix parse_cope(std::string_view text) { return cope_from_json(parse_json(text), "", true); }
CopeMatrix parse_cope_unchecked(std::string_view text) { return cope_from_json(parse_json(text), "", false); }
ModelFactorization parse_model(std::string_view text) { return model_from_json(parse_json(text), ""); }

Certificate parse_certificate(std::string_view text) {
  const json doc = parse_json(text);
  check_version(doc, "");
  CopeMatrix c = cope_from_json(member(doc, "", "matrix"), "matrix", true);
  Certificate cert{c, Verdict::Undetermined, NoEvidence{}, 0, 0, 0, 0.0, {}};
  try {
    cert.verdict = parse_verdict(string_value(member(doc, "", "verdict"), "verdict"));
  } catch (const PreconditionError& e) {
    throw ParseError("verdict", e.what());
  }
  const std::string kind = string_value(member(doc, "", "evidence_kind"), "evidence_kind");
  cert.evidence = evidence_from_json(kind, member(doc, "", "evidence"), "evidence");
  cert.rank = size_value(member(doc, "", "rank"), "rank");
  const json& range = array_member(doc, "", "searched_k_range");
  if (range.size() != 2) throw ParseError("searched_k_range", "expected [first, last]");
  cert.searched_k_first = size_value(range[0], "searched_k_range[0]");
  cert.searched_k_last = size_value(range[1], "searched_k_range[1]");
  const json& wt = member(doc, "", "wall_time_ms");
  if (!wt.is_number()) throw ParseError("wall_time_ms", "expected a number");
  cert.wall_time_ms = wt.get<double>();
  if (auto it = doc.find("metadata"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("metadata", "expected an object");
    for (const auto& [k, v] : it->items()) cert.metadata[k] = string_value(v, dot("metadata", k));
  }
  bool ok = false;
  try {
    ok = verify_certificate(cert);
  } catch (const std::exception& e) {
    throw ParseError("evidence", std::string("evidence could not be checked: ") + e.what());
  }
  if (!ok) throw ParseError("evidence", "embedded evidence does not re-verify against the matrix");
  return cert;
}

}  // namespace copekit
