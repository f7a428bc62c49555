#pragma once

#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "copekit/cope.hpp"

namespace copekit {

enum class ModelKind { PreGPT, GPT, Quasiprobabilistic, Ontological, NoncontextualOntological };

std::string_view to_string(ModelKind kind);
/// Accepts the names produced by to_string; throws PreconditionError otherwise.
ModelKind parse_model_kind(std::string_view name);

template <class T>
struct Factors {
  Matrix<T> effects;     // one row per outcome, blocks as in the source matrix
  Matrix<T> states;      // one column per preparation
  std::vector<T> unit;   // common per-block sum of effect rows
};

/// A factorization effects * states of a COPE matrix tagged with the model
/// class it was built as.
struct ModelFactorization {
  ModelKind kind = ModelKind::PreGPT;
  std::vector<std::size_t> block_sizes;
  std::variant<Factors<Rational>, Factors<double>> factors;
  double eps = kDefaultEps;

  Backend backend() const {
    return std::holds_alternative<Factors<Rational>>(factors) ? Backend::Rational : Backend::Float;
  }
  bool is_exact() const { return backend() == Backend::Rational; }
  std::size_t inner_dim() const;
  std::size_t num_rows() const;
  std::size_t num_preparations() const;

  const Factors<Rational>& exact() const;
  Factors<double> to_float() const;

  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), factors);
  }

  bool operator==(const ModelFactorization& other) const;
};

template <class T>
ModelFactorization make_model(ModelKind kind, std::vector<std::size_t> block_sizes, Matrix<T> effects,
                              Matrix<T> states, std::vector<T> unit, double eps = kDefaultEps) {
  ModelFactorization m;
  m.kind = kind;
  m.block_sizes = std::move(block_sizes);
  m.factors = Factors<T>{std::move(effects), std::move(states), std::move(unit)};
  m.eps = eps;
  return m;
}

/// Sum of the effect rows of each block if all blocks agree, else empty.
template <class T>
std::vector<T> common_block_sum(const Matrix<T>& effects, const std::vector<std::size_t>& block_sizes, double eps) {
  std::vector<T> common;
  std::size_t offset = 0;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    std::vector<T> sum(effects.cols(), T(0));
    for (std::size_t i = 0; i < block_sizes[b]; ++i)
      for (std::size_t j = 0; j < effects.cols(); ++j) sum[j] += effects(offset + i, j);
    offset += block_sizes[b];
    if (b == 0) {
      common = std::move(sum);
      continue;
    }
    for (std::size_t j = 0; j < sum.size(); ++j)
      if (!near_equal(sum[j], common[j], eps)) return {};
  }
  return common;
}

struct VerificationReport {
  bool reconstruction_ok = false;
  bool unit_ok = false;
  bool nonnegative_ok = false;
  bool states_column_stochastic_ok = false;
  std::size_t rank_c = 0;
  std::size_t rank_effects = 0;
  std::size_t rank_states = 0;
  bool equirank_ok = false;
  std::set<ModelKind> inferred_kinds;

  bool satisfies(ModelKind kind) const { return inferred_kinds.count(kind) != 0; }
};

/// Classifies a candidate factorization of c, ignoring its kind tag.
///
/// Every class requires reconstruction (effects * states == c) and a common
/// per-block unit equal to the stored unit. On top of that: GPT adds equirank;
/// quasiprobabilistic adds equirank with an all-ones unit; ontological needs
/// nonnegative factors, all-ones unit and column-stochastic states; the
/// noncontextual ontological class is ontological plus equirank.
/// Computation is exact when both sides are rational, else in double with the
/// larger of the two tolerances. Throws PreconditionError on shape mismatch.
VerificationReport classify_model(const CopeMatrix& c, const ModelFactorization& m);

}  // namespace copekit
