#pragma once

// Independent reference implementations used by the tests. Nothing here calls
// into the library's linear algebra, LP or polytope code.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "copekit/cope.hpp"
#include "copekit/model.hpp"

namespace oracle {

using Q = mpq_class;
using Rows = std::vector<std::vector<Q>>;

inline Rows rows_of(const copekit::Matrix<Q>& m) {
  Rows out(m.rows(), std::vector<Q>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

// Textbook Gauss-Jordan with the first nonzero pivot.
inline std::size_t rank(Rows a) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      Q f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

inline std::size_t rank(const copekit::Matrix<Q>& m) { return rank(rows_of(m)); }

// Solves the square system a x = b; empty when singular.
inline std::optional<std::vector<Q>> solve(Rows a, std::vector<Q> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Q f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
      b[i] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

// Vertices of {x >= 0, sum x = 1} intersected with the column space of m
// (single block). A vertex is pinned by r-1 tight coordinates plus the
// normalization, so enumerate (r-1)-subsets of rows.
inline std::vector<std::vector<Q>> span_simplex_vertices(const copekit::Matrix<Q>& m) {
  const Rows all = rows_of(m);
  const std::size_t rows = m.rows();
  // greedy column basis
  std::vector<std::size_t> basis;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Rows t(rows);
    auto trial = basis;
    trial.push_back(j);
    for (std::size_t i = 0; i < rows; ++i)
      for (auto c : trial) t[i].push_back(all[i][c]);
    if (oracle::rank(t) == trial.size()) basis = trial;
  }
  const std::size_t r = basis.size();
  auto b = [&](std::size_t i, std::size_t t) { return all[i][basis[t]]; };

  std::vector<std::vector<Q>> out;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() + 1 == r) {
      Rows a;
      for (auto i : pick) {
        std::vector<Q> row(r);
        for (std::size_t t = 0; t < r; ++t) row[t] = b(i, t);
        a.push_back(row);
      }
      std::vector<Q> norm(r, 0);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t t = 0; t < r; ++t) norm[t] += b(i, t);
      a.push_back(norm);
      std::vector<Q> rhs(r, 0);
      rhs[r - 1] = 1;
      auto y = solve(a, rhs);
      if (!y) return;
      std::vector<Q> x(rows, 0);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t t = 0; t < r; ++t) x[i] += b(i, t) * (*y)[t];
      if (std::all_of(x.begin(), x.end(), [](const Q& v) { return v >= 0; })) out.push_back(x);
      return;
    }
    for (std::size_t i = start; i < rows; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  if (r > 0) rec(0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- antichains ----

// Exhaustive over every family of subsets of a k-set. Feasible for k <= 4.
inline std::size_t max_antichain_exhaustive(unsigned k) {
  const unsigned n = 1u << k;
  std::size_t best = 0;
  for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << n); ++fam) {
    bool ok = true;
    for (unsigned a = 0; a < n && ok; ++a) {
      if (!(fam >> a & 1)) continue;
      for (unsigned b = 0; b < n && ok; ++b)
        if (a != b && (fam >> b & 1) && (a & b) == a) ok = false;
    }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcountll(fam)));
  }
  return best;
}

// Dilworth: width = |P| - maximum matching in the strict-containment bipartite graph.
inline std::size_t max_antichain_dilworth(unsigned k) {
  const unsigned n = 1u << k;
  std::vector<int> match(n, -1);
  auto augment = [&](auto&& self, unsigned a, std::vector<char>& seen) -> bool {
    for (unsigned b = 0; b < n; ++b) {
      if (a == b || (a & b) != a || seen[b]) continue;
      seen[b] = 1;
      if (match[b] < 0 || self(self, static_cast<unsigned>(match[b]), seen)) {
        match[b] = static_cast<int>(a);
        return true;
      }
    }
    return false;
  };
  std::size_t matched = 0;
  for (unsigned a = 0; a < n; ++a) {
    std::vector<char> seen(n, 0);
    if (augment(augment, a, seen)) ++matched;
  }
  return n - matched;
}

// ---- random inputs ----

// Column-stochastic blocks with every column of a block over a common
// denominator d <= max_den.
inline copekit::CopeMatrix random_cope(std::mt19937_64& rng, const std::vector<std::size_t>& block_sizes,
                                       std::size_t cols, long max_den = 4) {
  std::vector<copekit::Matrix<Q>> blocks;
  for (auto size : block_sizes) {
    copekit::Matrix<Q> b(size, cols);
    for (std::size_t j = 0; j < cols; ++j) {
      const long d = std::uniform_int_distribution<long>(1, max_den)(rng);
      for (long u = 0; u < d; ++u) {
        auto i = std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
        b(i, j) += Q(1, d);
      }
      for (std::size_t i = 0; i < size; ++i) b(i, j).canonicalize();
    }
    blocks.push_back(b);
  }
  return copekit::CopeMatrix::from_blocks(blocks);
}

// Random block structure with rows and cols inside the given caps.
inline copekit::CopeMatrix random_shape_cope(std::mt19937_64& rng, std::size_t max_rows, std::size_t max_cols,
                                             long max_den = 4) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  const std::size_t rows = pick(1, max_rows);
  std::vector<std::size_t> sizes;
  std::size_t left = rows;
  while (left > 0) {
    std::size_t s = pick(1, left);
    sizes.push_back(s);
    left -= s;
  }
  return random_cope(rng, sizes, pick(1, max_cols), max_den);
}

// ---- model checks, computed here from the raw factors ----

struct FactorCheck {
  bool reconstructs = false;
  bool common_unit = false;    // every block's effect rows sum to the stored unit
  bool unit_all_ones = false;
  bool nonnegative = false;
  bool states_stochastic = false;
  std::size_t rank_effects = 0;
  std::size_t rank_states = 0;
};

template <class T>
FactorCheck check_factors(const copekit::CopeMatrix& c, const copekit::Factors<T>& f,
                          const std::vector<std::size_t>& blocks, double tol) {
  auto close = [&](const auto& a, const auto& b) {
    if constexpr (std::is_same_v<T, Q>)
      return a == b;
    else
      return std::abs(a - b) <= tol;
  };
  const auto cf = c.to_float();
  FactorCheck out;
  const std::size_t k = f.effects.cols();
  out.reconstructs = f.effects.rows() == c.num_rows() && f.states.cols() == c.num_preparations() &&
                     f.states.rows() == k;
  for (std::size_t i = 0; out.reconstructs && i < c.num_rows(); ++i)
    for (std::size_t j = 0; j < c.num_preparations(); ++j) {
      T s = 0;
      for (std::size_t t = 0; t < k; ++t) s += f.effects(i, t) * f.states(t, j);
      bool ok;
      if constexpr (std::is_same_v<T, Q>)
        ok = c.is_exact() ? s == c.exact()(i, j) : std::abs(s.get_d() - cf(i, j)) <= tol;
      else
        ok = std::abs(s - cf(i, j)) <= tol;
      if (!ok) out.reconstructs = false;
    }
  out.common_unit = f.unit.size() == k;
  std::size_t off = 0;
  for (auto bs : blocks) {
    for (std::size_t t = 0; out.common_unit && t < k; ++t) {
      T s = 0;
      for (std::size_t i = 0; i < bs; ++i) s += f.effects(off + i, t);
      if (!close(s, f.unit[t])) out.common_unit = false;
    }
    off += bs;
  }
  out.unit_all_ones = std::all_of(f.unit.begin(), f.unit.end(), [&](const T& u) { return close(u, T(1)); });
  out.nonnegative = true;
  for (std::size_t i = 0; i < f.effects.rows(); ++i)
    for (std::size_t t = 0; t < k; ++t)
      if (f.effects(i, t) < T(0) && !close(f.effects(i, t), T(0))) out.nonnegative = false;
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t j = 0; j < f.states.cols(); ++j)
      if (f.states(t, j) < T(0) && !close(f.states(t, j), T(0))) out.nonnegative = false;
  out.states_stochastic = true;
  for (std::size_t j = 0; j < f.states.cols(); ++j) {
    T s = 0;
    for (std::size_t t = 0; t < k; ++t) s += f.states(t, j);
    if (!close(s, T(1))) out.states_stochastic = false;
  }
  if constexpr (std::is_same_v<T, Q>) {
    out.rank_effects = oracle::rank(f.effects);
    out.rank_states = oracle::rank(f.states);
  }
  return out;
}

inline FactorCheck check_model(const copekit::CopeMatrix& c, const copekit::ModelFactorization& m, double tol = 1e-7) {
  return m.visit([&](const auto& f) { return check_factors(c, f, m.block_sizes, tol); });
}

}  // namespace oracle
