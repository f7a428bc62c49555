#include "copekit/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "copekit/linalg.hpp"
#include "copekit/lp.hpp"

namespace copekit {

namespace {

struct Ray {
  std::vector<Rational> y;
  std::uint64_t zeros = 0;  // processed constraints that are tight
};

Rational dot(const Matrix<Rational>& a, std::size_t row, const std::vector<Rational>& y) {
  Rational s = 0;
  for (std::size_t j = 0; j < y.size(); ++j) s += a(row, j) * y[j];
  return s;
}

void normalize(std::vector<Rational>& y) {
  for (const auto& v : y) {
    if (sgn(v) == 0) continue;
    Rational scale = abs(v);
    for (auto& w : y) w /= scale;
    return;
  }
}

}  // namespace

SpanSimplexPolytope span_simplex_polytope(const CopeMatrix& c) {
  if (!c.is_exact()) throw PreconditionError("span_simplex_polytope needs the rational backend");
  if (c.num_measurements() != 1) throw PreconditionError("span_simplex_polytope expects a merged single-block matrix");
  const std::size_t m = c.num_rows();
  if (m > 64) throw GuardExceeded("ambient dimension " + std::to_string(m) + " exceeds 64");

  SpanSimplexPolytope q;
  q.ambient_dim = m;
  q.basis = c.exact().select_cols(independent_columns(c.exact()));
  const Matrix<Rational>& b = q.basis;
  const std::size_t r = b.cols();

  // Start from r independent rows; their cone is simplicial with rays = columns of the inverse.
  const std::vector<std::size_t> start_rows = independent_columns(b.transpose());
  auto inv = inverse(b.select_rows(start_rows));
  std::vector<Ray> rays;
  std::uint64_t processed = 0;
  for (auto i : start_rows) processed |= std::uint64_t{1} << i;
  for (std::size_t k = 0; k < r; ++k) {
    Ray ray;
    ray.y = inv->col(k);
    normalize(ray.y);
    for (std::size_t idx = 0; idx < start_rows.size(); ++idx)
      if (idx != k) ray.zeros |= std::uint64_t{1} << start_rows[idx];
    rays.push_back(std::move(ray));
  }

  for (std::size_t row = 0; row < m; ++row) {
    if (processed & (std::uint64_t{1} << row)) continue;
    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(b, row, rays[i].y);
      if (sgn(val[i]) > 0) pos.push_back(i);
      if (sgn(val[i]) < 0) neg.push_back(i);
    }
    const std::uint64_t bit = std::uint64_t{1} << row;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (sgn(val[i]) < 0) continue;
      Ray kept = rays[i];
      if (sgn(val[i]) == 0) kept.zeros |= bit;
      next.push_back(std::move(kept));
    }
    for (auto p : pos) {
      for (auto n : neg) {
        const std::uint64_t common = rays[p].zeros & rays[n].zeros;
        if (r >= 2 && static_cast<std::size_t>(std::popcount(common)) < r - 2) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o)
          if (o != p && o != n && (rays[o].zeros & common) == common) adjacent = false;
        if (!adjacent) continue;
        Ray fresh;
        fresh.y.resize(r);
        for (std::size_t j = 0; j < r; ++j) fresh.y[j] = val[p] * rays[n].y[j] - val[n] * rays[p].y[j];
        normalize(fresh.y);
        fresh.zeros = common | bit;
        next.push_back(std::move(fresh));
      }
    }
    rays = std::move(next);
    processed |= bit;
  }

  for (const auto& ray : rays) {
    std::vector<Rational> x = multiply(b, std::span<const Rational>(ray.y));
    Rational total = 0;
    for (const auto& v : x) total += v;
    for (auto& v : x) v /= total;
    q.vertices.push_back(std::move(x));
  }
  std::sort(q.vertices.begin(), q.vertices.end());
  q.vertices.erase(std::unique(q.vertices.begin(), q.vertices.end()), q.vertices.end());
  return q;
}

bool covers_columns(const SpanSimplexPolytope& q, const CopeMatrix& c) {
  const auto& m = c.exact();
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!in_convex_hull(q.vertices, m.col(j))) return false;
  return true;
}

std::vector<std::vector<Rational>> response_vertices(const CopeMatrix& c) {
  auto q = span_simplex_polytope(merge_measurements(c));
  const Rational scale(static_cast<long>(c.num_measurements()));
  for (auto& v : q.vertices)
    for (auto& x : v) x *= scale;
  return q.vertices;
}

std::vector<std::vector<Rational>> response_candidates(const CopeMatrix& c) {
  auto out = response_vertices(c);
  const auto& m = c.exact();
  for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.col(j));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace copekit
