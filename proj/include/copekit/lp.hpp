#pragma once

#include <optional>
#include <vector>

#include "copekit/matrix.hpp"

namespace copekit {

/// Finds x >= 0 with a x = b, or nullopt when none exists.
///
/// Phase-one simplex on a dense tableau with Bland's rule, so it terminates on
/// degenerate problems. Over Rational the answer is exact and the returned
/// point is a basic feasible solution; over double, eps is the pivot and
/// feasibility tolerance.
template <class T>
std::optional<std::vector<T>> find_nonneg_solution(const Matrix<T>& a, const std::vector<T>& b,
                                                   double eps = kDefaultEps);

extern template std::optional<std::vector<Rational>> find_nonneg_solution(const Matrix<Rational>&,
                                                                          const std::vector<Rational>&,
                                                                          double);
extern template std::optional<std::vector<double>> find_nonneg_solution(const Matrix<double>&,
                                                                        const std::vector<double>&, double);

/// Is target a convex combination of the given points?
template <class T>
bool in_convex_hull(const std::vector<std::vector<T>>& points, const std::vector<T>& target,
                    double eps = kDefaultEps) {
  if (points.empty()) return false;
  const std::size_t dim = target.size();
  Matrix<T> a(dim + 1, points.size());
  std::vector<T> b(dim + 1);
  for (std::size_t j = 0; j < points.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) a(i, j) = points[j][i];
    a(dim, j) = T(1);
  }
  for (std::size_t i = 0; i < dim; ++i) b[i] = target[i];
  b[dim] = T(1);
  return find_nonneg_solution(a, b, eps).has_value();
}

}  // namespace copekit
