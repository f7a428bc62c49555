#include "copekit/model.hpp"

#include <algorithm>

#include "copekit/linalg.hpp"

namespace copekit {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::PreGPT: return "PreGPT";
    case ModelKind::GPT: return "GPT";
    case ModelKind::Quasiprobabilistic: return "Quasiprobabilistic";
    case ModelKind::Ontological: return "Ontological";
    case ModelKind::NoncontextualOntological: return "NoncontextualOntological";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  for (auto k : {ModelKind::PreGPT, ModelKind::GPT, ModelKind::Quasiprobabilistic, ModelKind::Ontological,
                 ModelKind::NoncontextualOntological})
    if (to_string(k) == name) return k;
  throw PreconditionError("unknown model kind '" + std::string(name) + "'");
}

std::size_t ModelFactorization::inner_dim() const {
  return visit([](const auto& f) { return f.effects.cols(); });
}
std::size_t ModelFactorization::num_rows() const {
  return visit([](const auto& f) { return f.effects.rows(); });
}
std::size_t ModelFactorization::num_preparations() const {
  return visit([](const auto& f) { return f.states.cols(); });
}

const Factors<Rational>& ModelFactorization::exact() const {
  if (!is_exact()) throw PreconditionError("model is not on the rational backend");
  return std::get<Factors<Rational>>(factors);
}

Factors<double> ModelFactorization::to_float() const {
  return visit([](const auto& f) {
    return Factors<double>{Matrix<double>(to_double(f.effects)), Matrix<double>(to_double(f.states)),
                           std::vector<double>(to_double(f.unit))};
  });
}

bool ModelFactorization::operator==(const ModelFactorization& other) const {
  if (kind != other.kind || block_sizes != other.block_sizes || backend() != other.backend()) return false;
  if (is_exact()) {
    const auto& a = exact();
    const auto& b = other.exact();
    return a.effects == b.effects && a.states == b.states && a.unit == b.unit;
  }
  const auto& a = std::get<Factors<double>>(factors);
  const auto& b = std::get<Factors<double>>(other.factors);
  return eps == other.eps && a.effects == b.effects && a.states == b.states && a.unit == b.unit;
}

namespace {

template <class T>
VerificationReport classify_impl(const Matrix<T>& c, const std::vector<std::size_t>& block_sizes,
                                 const Factors<T>& f, double eps) {
  VerificationReport rep;
  const auto& effects = f.effects;
  const auto& states = f.states;

  rep.reconstruction_ok = near_equal(effects * states, c, eps);

  auto common = common_block_sum(effects, block_sizes, eps);
  rep.unit_ok = !common.empty() && common.size() == f.unit.size();
  if (rep.unit_ok)
    for (std::size_t j = 0; j < common.size(); ++j)
      if (!near_equal(common[j], f.unit[j], eps)) rep.unit_ok = false;
  bool unit_all_ones = rep.unit_ok;
  if (unit_all_ones)
    for (const auto& x : f.unit)
      if (!near_equal(x, T(1), eps)) unit_all_ones = false;

  rep.nonnegative_ok = std::all_of(effects.data().begin(), effects.data().end(),
                                   [&](const T& x) { return is_nonneg(x, eps); }) &&
                       std::all_of(states.data().begin(), states.data().end(),
                                   [&](const T& x) { return is_nonneg(x, eps); });

  rep.states_column_stochastic_ok = true;
  for (std::size_t j = 0; j < states.cols(); ++j) {
    T sum(0);
    for (std::size_t i = 0; i < states.rows(); ++i) {
      sum += states(i, j);
      if (!is_nonneg(states(i, j), eps)) rep.states_column_stochastic_ok = false;
    }
    if (!near_equal(sum, T(1), eps * static_cast<double>(std::max<std::size_t>(1, states.rows()))))
      rep.states_column_stochastic_ok = false;
  }

  rep.rank_c = rank(c, eps);
  rep.rank_effects = rank(effects, eps);
  rep.rank_states = rank(states, eps);
  rep.equirank_ok = rep.rank_c == rep.rank_effects && rep.rank_c == rep.rank_states;

  const bool base = rep.reconstruction_ok && rep.unit_ok;
  if (base) rep.inferred_kinds.insert(ModelKind::PreGPT);
  if (base && rep.equirank_ok) rep.inferred_kinds.insert(ModelKind::GPT);
  if (base && rep.equirank_ok && unit_all_ones) rep.inferred_kinds.insert(ModelKind::Quasiprobabilistic);
  const bool ontological = base && unit_all_ones && rep.nonnegative_ok && rep.states_column_stochastic_ok;
  if (ontological) rep.inferred_kinds.insert(ModelKind::Ontological);
  if (ontological && rep.equirank_ok) rep.inferred_kinds.insert(ModelKind::NoncontextualOntological);
  return rep;
}

}  // namespace

VerificationReport classify_model(const CopeMatrix& c, const ModelFactorization& m) {
  if (m.num_rows() != c.num_rows() || m.num_preparations() != c.num_preparations())
    throw PreconditionError("model shape does not match the COPE matrix");
  if (m.block_sizes != c.block_sizes()) throw PreconditionError("model block structure does not match the COPE matrix");
  m.visit([&](const auto& f) {
    if (f.states.rows() != f.effects.cols()) throw PreconditionError("effects and states disagree on inner dimension");
    if (f.unit.size() != f.effects.cols()) throw PreconditionError("unit vector length differs from inner dimension");
  });

  if (c.is_exact() && m.is_exact()) return classify_impl(c.exact(), c.block_sizes(), m.exact(), 0.0);
  const double eps = std::max(c.is_exact() ? 0.0 : c.eps(), m.is_exact() ? 0.0 : m.eps);
  return classify_impl(c.to_float(), c.block_sizes(), m.to_float(), eps > 0.0 ? eps : kDefaultEps);
}

}  // namespace copekit
