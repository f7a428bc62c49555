#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "copekit/model.hpp"

namespace copekit {

/// Search settings for the nonnegative factorization heuristics.
struct NmfOptions {
  std::size_t inner_dim = 1;
  std::size_t max_restarts = 12;
  std::size_t max_iterations = 1500;
  std::uint64_t seed = 1;
  /// Float factors are snapped to fractions within this distance before exact re-verification.
  double rounding_tolerance = 1e-6;
  long max_denominator = 720;
  /// Largest inner dimension tried by enmf; defaults to rank + 3.
  std::optional<std::size_t> max_inner_dim;
  /// Concurrent restarts; 0 reads COPEKIT_THREADS and falls back to the hardware count.
  std::size_t threads = 0;
};

void check_options(const NmfOptions& opts);

/// preGPT from the full SVD C = U (Sigma V^T). Effects are U with the
/// kernel-direction columns projected onto the set of vectors whose block
/// sums agree, so every measurement shares one unit. Inner dimension equals
/// the number of outcome rows. Rational inputs are converted to double.
ModelFactorization pregpt_from_svd(const CopeMatrix& c);

/// GPT: an equirank real factorization of inner dimension rank(c).
/// Rational inputs use the pivot-column rank factorization (unit = all ones);
/// float inputs truncate pregpt_from_svd to the nonzero singular directions.
ModelFactorization gpt(const CopeMatrix& c);

/// Quasiprobabilistic model from a GPT using T = states restricted to the
/// given tomographic columns: effects * T and T^-1 * states.
/// Throws PreconditionError when T is not square or is singular.
ModelFactorization quasi_from_gpt(const ModelFactorization& g, std::span<const std::size_t> tom_columns);

/// Same with an explicit invertible change of basis T.
ModelFactorization quasi_from_transform(const ModelFactorization& g, const Matrix<Rational>& t);
ModelFactorization quasi_from_transform(const ModelFactorization& g, const Matrix<double>& t);

/// effects = C, states = identity, unit = all ones.
ModelFactorization trivial_ontological(const CopeMatrix& c);

/// Response functions from GPT effects paired with every GPT state, and
/// point-mass epistemic states. The response functions are the rows of C, so
/// the result coincides with trivial_ontological(c). Throws
/// PreconditionError when g does not reproduce c.
ModelFactorization gpt_to_trivial_ontological(const ModelFactorization& g, const CopeMatrix& c);

struct FiducialTomography {
  bool states_fiducial = false;
  bool effects_fiducial = false;
};

/// Strictly more columns (distinct rows) than rank. Expects an extremal-quotiented matrix.
FiducialTomography fiducial_tomography_test(const CopeMatrix& c);

/// Nonnegative factorization with all-ones unit and column-stochastic states
/// at inner dimension opts.inner_dim, or nullopt when the heuristic search
/// fails. Rational inputs only return factorizations that re-verify exactly.
std::optional<ModelFactorization> nmf(const CopeMatrix& c, const NmfOptions& opts);

struct EnmfSearch {
  std::optional<ModelFactorization> model;
  std::size_t k_first = 0;
  std::size_t k_last = 0;
};

inline constexpr std::size_t kMaxEnmfSpan = 16;

/// Equirank nonnegative factorization search over k = rank .. max_inner_dim.
/// Throws GuardExceeded when max_inner_dim - rank > kMaxEnmfSpan.
EnmfSearch enmf_search(const CopeMatrix& c, const NmfOptions& opts);
std::optional<ModelFactorization> enmf(const CopeMatrix& c, const NmfOptions& opts);

/// Completes candidate response functions r (columns with unit block sums)
/// to a model by an LP for column-stochastic states P >= 0 with r P = C.
/// With equirank, also requires the rows of P to lie in the row space of C
/// (P Z = 0 for a kernel basis Z), which makes the model equirank whenever
/// the columns of r lie in the column space. Returns only verified models.
std::optional<ModelFactorization> complete_with_states(const CopeMatrix& c, const Matrix<Rational>& r, bool equirank);
std::optional<ModelFactorization> complete_with_states(const CopeMatrix& c, const Matrix<double>& r, bool equirank);

/// Number of worker threads for NMF restarts (COPEKIT_THREADS, else hardware).
std::size_t restart_threads(const NmfOptions& opts);

}  // namespace copekit
