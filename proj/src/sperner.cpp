#include "copekit/sperner.hpp"

#include <algorithm>

namespace copekit {

namespace {

struct ZeroGraph {
  std::size_t rows = 0, cols = 0;
  std::vector<std::vector<bool>> zero;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // zero entries, row-major

  // Two zero entries can sit together in a witness.
  bool compatible(std::size_t a, std::size_t b) const {
    const auto [r1, c1] = edges[a];
    const auto [r2, c2] = edges[b];
    return r1 != r2 && c1 != c2 && !zero[r1][c2] && !zero[r2][c1];
  }
};

ZeroGraph zero_graph(const CopeMatrix& c) {
  ZeroGraph g;
  g.rows = c.num_rows();
  g.cols = c.num_preparations();
  g.zero.assign(g.rows, std::vector<bool>(g.cols, false));
  c.visit([&](const auto& m) {
    for (std::size_t i = 0; i < g.rows; ++i)
      for (std::size_t j = 0; j < g.cols; ++j) g.zero[i][j] = is_zero(m(i, j), c.eps());
  });
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j)
      if (g.zero[i][j]) g.edges.emplace_back(i, j);
  return g;
}

void exact_search(const ZeroGraph& g, std::vector<std::size_t>& current, std::size_t from,
                  std::vector<std::size_t>& best) {
  if (current.size() > best.size()) best = current;
  const std::size_t limit = std::min(g.rows, g.cols);
  for (std::size_t e = from; e < g.edges.size(); ++e) {
    if (current.size() + (g.edges.size() - e) <= best.size() || best.size() >= limit) return;
    if (!std::all_of(current.begin(), current.end(), [&](std::size_t x) { return g.compatible(x, e); })) continue;
    current.push_back(e);
    exact_search(g, current, e + 1, best);
    current.pop_back();
  }
}

std::vector<std::size_t> greedy_search(const ZeroGraph& g) {
  const std::size_t n = g.edges.size();
  std::vector<std::size_t> conflicts(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && !g.compatible(a, b)) ++conflicts[a];
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return conflicts[a] < conflicts[b]; });

  std::vector<std::size_t> chosen;
  auto fits = [&](const std::vector<std::size_t>& set, std::size_t e, std::size_t skip) {
    for (auto x : set)
      if (x != skip && (x == e || !g.compatible(x, e))) return false;
    return true;
  };
  for (auto e : order)
    if (fits(chosen, e, n)) chosen.push_back(e);

  // (1,2)-swaps: drop one chosen entry to admit two new ones.
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t out = 0; out < chosen.size() && !improved; ++out) {
      const std::size_t removed = chosen[out];
      std::vector<std::size_t> free;
      for (std::size_t e = 0; e < n; ++e)
        if (e != removed && fits(chosen, e, removed)) free.push_back(e);
      for (std::size_t i = 0; i < free.size() && !improved; ++i)
        for (std::size_t j = i + 1; j < free.size() && !improved; ++j)
          if (g.compatible(free[i], free[j])) {
            chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(out));
            chosen.push_back(free[i]);
            chosen.push_back(free[j]);
            improved = true;
          }
    }
  }
  return chosen;
}

}  // namespace

unsigned long long central_binomial(std::size_t k) {
  unsigned long long r = 1;
  const std::size_t h = k / 2;
  for (std::size_t i = 1; i <= h; ++i) r = r * (k - h + i) / i;
  return r;
}

std::size_t sperner_ontic_bound(std::size_t m) {
  if (m < 1) throw PreconditionError("sperner bounds need m >= 1");
  std::size_t k = 0;
  while (central_binomial(k) < m) ++k;
  return std::max<std::size_t>(k, 1);
}

std::size_t sperner_span_bound(std::size_t m) {
  if (m < 1) throw PreconditionError("sperner bounds need m >= 1");
  std::size_t l = 0;
  while (central_binomial(l + 1) <= m) ++l;
  return l;
}

std::optional<SpernerWitness> sperner_submatrix(const CopeMatrix& c) {
  require_valid(c);
  const ZeroGraph g = zero_graph(c);
  std::vector<std::size_t> best;
  if (g.rows + g.cols <= 12) {
    std::vector<std::size_t> current;
    exact_search(g, current, 0, best);
  } else {
    best = greedy_search(g);
  }
  if (best.size() < 2) return std::nullopt;
  std::sort(best.begin(), best.end(), [&](auto a, auto b) { return g.edges[a].second < g.edges[b].second; });
  SpernerWitness w;
  for (auto e : best) {
    w.row_indices.push_back(g.edges[e].first);
    w.col_indices.push_back(g.edges[e].second);
  }
  w.m = best.size();
  w.ontic_dim_lower_bound = sperner_ontic_bound(w.m);
  w.factor_span_lower_bound = sperner_span_bound(w.m);
  return w;
}

bool is_sperner_witness(const CopeMatrix& c, const SpernerWitness& w) {
  if (w.row_indices.size() != w.m || w.col_indices.size() != w.m || w.m == 0) return false;
  return c.visit([&](const auto& mat) {
    auto zero = [&](std::size_t i, std::size_t j) { return is_zero(mat(i, j), c.eps()); };
    for (std::size_t t = 0; t < w.m; ++t) {
      if (w.row_indices[t] >= mat.rows() || w.col_indices[t] >= mat.cols()) return false;
      if (!zero(w.row_indices[t], w.col_indices[t])) return false;
      for (std::size_t s = 0; s < w.m; ++s) {
        if (s == t) continue;
        // Column side: the witness row of column t is nonzero on the other columns.
        if (zero(w.row_indices[t], w.col_indices[s])) return false;
        // Row side: the witness column of row t is nonzero on the other rows.
        if (zero(w.row_indices[s], w.col_indices[t])) return false;
      }
    }
    return true;
  });
}

}  // namespace copekit
