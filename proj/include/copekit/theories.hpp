#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "copekit/model.hpp"

namespace copekit {

/// Six preparations and three dichotomic measurements of the toy theory built
/// on the knowledge balance principle.
CopeMatrix spekkens();

/// Four preparations and two dichotomic measurements (square gbit fragment).
CopeMatrix boxworld();

/// Six preparations and two three-outcome measurements; the last two
/// preparations are operationally equivalent.
CopeMatrix extended_boxworld();

/// Explicit models for "spekkens", "boxworld" or "extended_boxworld"
/// ("extended-boxworld" is accepted too). Throws PreconditionError otherwise.
std::vector<ModelFactorization> reference_models(std::string_view theory);

struct BlochDirection {
  double x = 0.0, y = 0.0, z = 1.0;

  /// Normalizes (x, y, z); throws PreconditionError for the zero vector.
  static BlochDirection normalized(double x, double y, double z);
  double dot(const BlochDirection& o) const { return x * o.x + y * o.y + z * o.z; }
};

/// Qubit fragment on a finite set of Bloch directions. Preparations are +v
/// (and -v when include_antipodes) for each direction in order; each
/// direction contributes one dichotomic measurement with outcomes (+v, -v).
/// Entries are (1 + u.w)/2 on the float backend.
/// Throws PreconditionError for an empty list, non-unit or parallel directions.
CopeMatrix discrete_qubit(const std::vector<BlochDirection>& directions, bool include_antipodes,
                          double eps = kDefaultEps);

/// Reproducible pseudo-random directions, uniform on the sphere
/// (mt19937_64 with the given seed).
std::vector<BlochDirection> generic_directions(std::size_t count, std::uint64_t seed = 20240605);

/// The x, y, z axes in that order; discrete_qubit on them equals spekkens() in value.
std::vector<BlochDirection> cardinal_directions();

}  // namespace copekit
