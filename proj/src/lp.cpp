#include "copekit/lp.hpp"

#include <cmath>

namespace copekit {

namespace {

inline bool negative(const Rational& x, double) { return sgn(x) < 0; }
inline bool negative(double x, double eps) { return x < -eps; }
inline bool positive(const Rational& x, double) { return sgn(x) > 0; }
inline bool positive(double x, double eps) { return x > eps; }

}  // namespace

template <class T>
std::optional<std::vector<T>> find_nonneg_solution(const Matrix<T>& a, const std::vector<T>& b, double eps) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) throw std::invalid_argument("find_nonneg_solution: rhs size mismatch");
  if (m == 0) return std::vector<T>(n, T(0));

  // Columns: n structural, m artificial, 1 right-hand side.
  const std::size_t width = n + m + 1;
  const std::size_t rhs = n + m;
  Matrix<T> tab(m, width);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = negative(b[i], 0.0);
    for (std::size_t j = 0; j < n; ++j) tab(i, j) = flip ? T(-a(i, j)) : a(i, j);
    tab(i, n + i) = T(1);
    tab(i, rhs) = flip ? T(-b[i]) : b[i];
    basis[i] = n + i;
  }

  // Reduced costs of "minimize the sum of artificials".
  std::vector<T> cost(width, T(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[j] -= tab(i, j);
  for (std::size_t i = 0; i < m; ++i) cost[rhs] -= tab(i, rhs);

  const std::size_t max_pivots = 50 * (n + m) + 1000;
  for (std::size_t iter = 0; iter < max_pivots; ++iter) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < n + m; ++j)
      if (negative(cost[j], eps)) {
        enter = j;
        break;
      }
    if (enter == width) break;

    std::size_t leave = m;
    T best_ratio{};
    for (std::size_t i = 0; i < m; ++i) {
      if (!positive(tab(i, enter), eps)) continue;
      T ratio = tab(i, rhs) / tab(i, enter);
      bool take = leave == m;
      if (!take) {
        if constexpr (std::is_same_v<T, double>) {
          take = ratio < best_ratio - eps ||
                 (std::abs(ratio - best_ratio) <= eps && basis[i] < basis[leave]);
        } else {
          take = ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave]);
        }
      }
      if (take) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction cannot occur in phase one

    T pivot = tab(leave, enter);
    for (std::size_t j = 0; j < width; ++j) tab(leave, j) /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      T factor = tab(i, enter);
      if (factor == T(0)) continue;
      for (std::size_t j = 0; j < width; ++j) tab(i, j) -= factor * tab(leave, j);
    }
    T factor = cost[enter];
    for (std::size_t j = 0; j < width; ++j) cost[j] -= factor * tab(leave, j);
    basis[leave] = enter;
  }

  // cost[rhs] is minus the phase-one objective.
  T objective = -cost[rhs];
  if constexpr (std::is_same_v<T, double>) {
    if (objective > eps * std::max(1.0, static_cast<double>(m))) return std::nullopt;
  } else {
    if (sgn(objective) != 0) return std::nullopt;
  }

  std::vector<T> x(n, T(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = tab(i, rhs);
  if constexpr (std::is_same_v<T, double>) {
    for (auto& v : x)
      if (v < 0.0) v = 0.0;
  }
  return x;
}

template std::optional<std::vector<Rational>> find_nonneg_solution(const Matrix<Rational>&,
                                                                   const std::vector<Rational>&, double);
template std::optional<std::vector<double>> find_nonneg_solution(const Matrix<double>&, const std::vector<double>&,
                                                                 double);

}  // namespace copekit
