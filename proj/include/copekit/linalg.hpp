#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "copekit/matrix.hpp"

namespace copekit {

/// Rank by fraction-free (Bareiss) elimination. Rows are first scaled to
/// integers, so every intermediate stays in Z.
std::size_t rank(const Matrix<Rational>& m);

/// Number of singular values above eps * (largest singular value).
std::size_t rank(const Matrix<double>& m, double eps);

inline std::size_t rank(const Matrix<Rational>& m, double /*eps*/) { return rank(m); }

/// Singular values in decreasing order.
std::vector<double> singular_values(const Matrix<double>& m);

template <class T>
struct RowEchelon {
  Matrix<T> reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

namespace detail {

inline bool pivot_ok(const Rational& x, double) { return sgn(x) != 0; }
inline bool pivot_ok(double x, double tol) { return std::abs(x) > tol; }

inline double magnitude(const Rational& x) { return std::abs(x.get_d()); }
inline double magnitude(double x) { return std::abs(x); }

template <class T>
double max_magnitude(const Matrix<T>& m) {
  double best = 0.0;
  for (const auto& x : m.data()) best = std::max(best, magnitude(x));
  return best;
}

}  // namespace detail

/// Gauss-Jordan elimination. Exact for rationals; for doubles uses partial
/// pivoting and treats |x| <= eps * max(1, max|entry|) as zero.
template <class T>
RowEchelon<T> rref(Matrix<T> a, double eps = kDefaultEps) {
  const double tol = eps * std::max(1.0, detail::max_magnitude(a));
  RowEchelon<T> out;
  std::size_t lead_row = 0;
  for (std::size_t col = 0; col < a.cols() && lead_row < a.rows(); ++col) {
    std::size_t best = a.rows();
    double best_mag = -1.0;
    for (std::size_t i = lead_row; i < a.rows(); ++i) {
      if (!detail::pivot_ok(a(i, col), tol)) continue;
      if constexpr (std::is_same_v<T, Rational>) {
        best = i;
        break;
      } else {
        if (std::abs(a(i, col)) > best_mag) {
          best_mag = std::abs(a(i, col));
          best = i;
        }
      }
    }
    if (best == a.rows()) {
      if constexpr (std::is_same_v<T, double>)
        for (std::size_t i = lead_row; i < a.rows(); ++i) a(i, col) = 0.0;
      continue;
    }
    if (best != lead_row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(best, j), a(lead_row, j));
    T inv = T(1) / a(lead_row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(lead_row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == lead_row || a(i, col) == T(0)) continue;
      T factor = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= factor * a(lead_row, j);
      if constexpr (std::is_same_v<T, double>) a(i, col) = 0.0;
    }
    out.pivots.push_back(col);
    ++lead_row;
  }
  out.reduced = std::move(a);
  return out;
}

/// Columns spanning the right null space {x : a x = 0}.
template <class T>
Matrix<T> kernel_basis(const Matrix<T>& a, double eps = kDefaultEps) {
  auto ech = rref(a, eps);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : ech.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  Matrix<T> basis(a.cols(), free_cols.size());
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    basis(free_cols[f], f) = T(1);
    for (std::size_t r = 0; r < ech.pivots.size(); ++r)
      basis(ech.pivots[r], f) = -ech.reduced(r, free_cols[f]);
  }
  return basis;
}

/// Inverse of a square matrix, or nullopt when singular.
template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a, double eps = kDefaultEps) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = T(1);
  }
  auto ech = rref(std::move(aug), eps);
  if (ech.pivots.size() < n || ech.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = ech.reduced(i, n + j);
  return inv;
}

/// Rank factorization a = left * right where left holds the pivot columns of a
/// and right the nonzero rows of rref(a).
template <class T>
struct RankFactorization {
  Matrix<T> left;
  Matrix<T> right;
  std::vector<std::size_t> pivots;
};

template <class T>
RankFactorization<T> rank_factorization(const Matrix<T>& a, double eps = kDefaultEps) {
  auto ech = rref(a, eps);
  RankFactorization<T> out;
  out.pivots = ech.pivots;
  out.left = a.select_cols(ech.pivots);
  out.right = Matrix<T>(ech.pivots.size(), a.cols());
  for (std::size_t r = 0; r < ech.pivots.size(); ++r)
    for (std::size_t j = 0; j < a.cols(); ++j) out.right(r, j) = ech.reduced(r, j);
  return out;
}

/// Indices of a maximal linearly independent subset of columns (lowest first).
template <class T>
std::vector<std::size_t> independent_columns(const Matrix<T>& a, double eps = kDefaultEps) {
  return rref(a, eps).pivots;
}

}  // namespace copekit
