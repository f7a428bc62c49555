#pragma once

#include <optional>
#include <vector>

#include "copekit/cope.hpp"

namespace copekit {

/// Central binomial coefficient C(k, floor(k/2)).
unsigned long long central_binomial(std::size_t k);

/// Smallest k with m <= C(k, floor(k/2)), reported as at least 1.
std::size_t sperner_ontic_bound(std::size_t m);
/// Largest l with C(l, floor(l/2)) <= m.
std::size_t sperner_span_bound(std::size_t m);

/// Square submatrix whose zero pattern is a permutation matrix: row
/// row_indices[t] is zero at column col_indices[t] and nonzero at every other
/// selected column, and symmetrically. For square selections the column-side
/// and row-side unique-zero conditions coincide.
struct SpernerWitness {
  std::vector<std::size_t> row_indices;
  std::vector<std::size_t> col_indices;
  std::size_t m = 0;
  std::size_t ontic_dim_lower_bound = 0;
  std::size_t factor_span_lower_bound = 0;
};

/// Largest such submatrix: exact branch and bound when rows + cols <= 12,
/// greedy with swap-based local search above. Float zeros are entries <= eps.
/// Absent when no witness with m >= 2 exists.
std::optional<SpernerWitness> sperner_submatrix(const CopeMatrix& c);

/// Checks the unique-zero conditions on both sides for a proposed witness.
bool is_sperner_witness(const CopeMatrix& c, const SpernerWitness& w);

}  // namespace copekit
