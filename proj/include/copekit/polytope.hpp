#pragma once

#include <vector>

#include "copekit/cope.hpp"

namespace copekit {

/// Q = column-space(C) intersected with the probability simplex.
struct SpanSimplexPolytope {
  std::size_t ambient_dim = 0;
  Matrix<Rational> basis;                   // independent columns of C
  std::vector<std::vector<Rational>> vertices;  // sorted lexicographically
};

/// Vertices of Q for a merged (single-block) exact matrix, by double
/// description on the cone {y : basis * y >= 0}. Each extreme ray y maps to
/// the vertex basis*y / sum(basis*y).
/// Throws PreconditionError for float input or more than one block, and
/// GuardExceeded when ambient_dim > 64.
SpanSimplexPolytope span_simplex_polytope(const CopeMatrix& c);

/// Every column of c lies in the convex hull of the vertices (exact LP per column).
bool covers_columns(const SpanSimplexPolytope& q, const CopeMatrix& c);

/// Vertices of Q for an unmerged exact matrix, rescaled so each block sums
/// to one. These are the only candidates for extremal response functions of
/// an equirank model.
std::vector<std::vector<Rational>> response_vertices(const CopeMatrix& c);

/// Response vertices together with the distinct columns of c, sorted and
/// deduplicated. Used as the support set of exact equirank searches.
std::vector<std::vector<Rational>> response_candidates(const CopeMatrix& c);

}  // namespace copekit
