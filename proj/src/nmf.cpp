// Nonnegative factorization search: penalized alternating projected gradient
// with seeded restarts, then rational snapping and exact LP completion.

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <random>
#include <thread>

#include "copekit/factorizer.hpp"
#include "copekit/linalg.hpp"
#include "copekit/lp.hpp"
#include "copekit/polytope.hpp"

namespace copekit {

namespace {

using Eigen::MatrixXd;

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

MatrixXd to_eigen(const Matrix<double>& m) {
  MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

Matrix<double> from_eigen(const MatrixXd& e) {
  Matrix<double> m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

MatrixXd projector_complement(const MatrixXd& a, double eps) {
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > eps * std::max(1.0, s(0))) ++r;
  MatrixXd u = svd.matrixU().leftCols(r);
  return MatrixXd::Identity(a.rows(), a.rows()) - u * u.transpose();
}

double spectral_norm_sym(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct Setup {
  MatrixXd c;
  std::vector<std::size_t> blocks;
  std::size_t k = 1;
  bool equirank = false;
  MatrixXd col_null;  // I - projector onto column space of C
  MatrixXd row_null;  // I - projector onto row space of C
  double alpha = 1.0;
  double beta = 0.0;
};

struct Run {
  MatrixXd r, p;
  double loss = 0.0;
  std::size_t restart = 0;
};

// D(b, l) = sum of R over block b in column l, minus one.
MatrixXd block_excess(const MatrixXd& r, const std::vector<std::size_t>& blocks) {
  MatrixXd d(static_cast<Eigen::Index>(blocks.size()), r.cols());
  Eigen::Index off = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto n = static_cast<Eigen::Index>(blocks[b]);
    d.row(static_cast<Eigen::Index>(b)) = r.middleRows(off, n).colwise().sum().array() - 1.0;
    off += n;
  }
  return d;
}

double objective(const Setup& s, const MatrixXd& r, const MatrixXd& p) {
  double f = (r * p - s.c).squaredNorm();
  f += s.alpha * block_excess(r, s.blocks).squaredNorm();
  f += s.alpha * (p.colwise().sum().array() - 1.0).matrix().squaredNorm();
  if (s.equirank) f += s.beta * ((s.col_null * r).squaredNorm() + (p * s.row_null).squaredNorm());
  return 0.5 * f;
}

MatrixXd grad_r(const Setup& s, const MatrixXd& r, const MatrixXd& p) {
  MatrixXd g = (r * p - s.c) * p.transpose();
  const MatrixXd d = block_excess(r, s.blocks);
  Eigen::Index off = 0;
  for (std::size_t b = 0; b < s.blocks.size(); ++b) {
    const auto n = static_cast<Eigen::Index>(s.blocks[b]);
    g.middleRows(off, n).rowwise() += s.alpha * d.row(static_cast<Eigen::Index>(b));
    off += n;
  }
  if (s.equirank) g += s.beta * s.col_null * r;
  return g;
}

MatrixXd grad_p(const Setup& s, const MatrixXd& r, const MatrixXd& p) {
  MatrixXd g = r.transpose() * (r * p - s.c);
  const Eigen::RowVectorXd excess = p.colwise().sum().array() - 1.0;
  g.rowwise() += s.alpha * excess;
  if (s.equirank) g += s.beta * p * s.row_null;
  return g;
}

// A few accelerated projected gradient steps on one factor.
template <class Grad>
void fista(MatrixXd& x, double lipschitz, int steps, Grad grad) {
  MatrixXd y = x, prev = x;
  double t = 1.0;
  const double step = 1.0 / std::max(lipschitz, 1e-12);
  for (int it = 0; it < steps; ++it) {
    MatrixXd next = (y - step * grad(y)).cwiseMax(0.0);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - prev);
    prev = std::move(next);
    t = t_next;
  }
  x = prev;
}

Run run_restart(const Setup& s, std::size_t iterations, std::uint64_t seed, std::size_t restart) {
  std::mt19937_64 gen(seed + restart);
  const auto m = s.c.rows(), n = s.c.cols(), k = static_cast<Eigen::Index>(s.k);
  MatrixXd r(m, k), p(k, n);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < m; ++i) r(i, j) = uniform01(gen) + 1e-3;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < k; ++i) p(i, j) = uniform01(gen) + 1e-3;
  Eigen::Index off = 0;
  for (auto b : s.blocks) {
    const auto nb = static_cast<Eigen::Index>(b);
    MatrixXd blk = r.middleRows(off, nb);
    r.middleRows(off, nb) = blk.array().rowwise() / blk.colwise().sum().array();
    off += nb;
  }
  p = p.array().rowwise() / p.colwise().sum().array();

  const double max_block = static_cast<double>(*std::max_element(s.blocks.begin(), s.blocks.end()));
  const double pen = s.equirank ? s.beta : 0.0;
  double last = objective(s, r, p);
  for (std::size_t it = 0; it < iterations; ++it) {
    const double lr = spectral_norm_sym(p * p.transpose()) + s.alpha * max_block + pen;
    fista(r, lr, 4, [&](const MatrixXd& x) { return grad_r(s, x, p); });
    const double lp = spectral_norm_sym(r.transpose() * r) + s.alpha * static_cast<double>(s.k) + pen;
    fista(p, lp, 4, [&](const MatrixXd& x) { return grad_p(s, r, x); });
    if (it % 50 != 49) continue;
    const double f = objective(s, r, p);
    if (f < 1e-26) break;
    // Stalled away from zero: this restart will not reach an exact factorization.
    if (f > 1e-10 && f > 0.999 * last) break;
    last = f;
  }
  if (!s.equirank) {
    // Multiplicative-update polish on the plain reconstruction loss.
    for (int it = 0; it < 200; ++it) {
      r = r.cwiseProduct((s.c * p.transpose()).cwiseQuotient(r * p * p.transpose() + MatrixXd::Constant(m, k, 1e-300)));
      p = p.cwiseProduct((r.transpose() * s.c).cwiseQuotient(r.transpose() * r * p + MatrixXd::Constant(k, n, 1e-300)));
    }
  }
  return Run{r, p, objective(s, r, p), restart};
}

std::vector<Run> run_restarts(const Setup& s, const NmfOptions& opts) {
  std::vector<Run> runs(opts.max_restarts);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) runs[i] = run_restart(s, opts.max_iterations, opts.seed, i);
  };
  const std::size_t nthreads = std::min(restart_threads(opts), runs.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // Deterministic regardless of scheduling: lowest loss, then lowest seed.
  std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
    return a.loss != b.loss ? a.loss < b.loss : a.restart < b.restart;
  });
  return runs;
}

std::optional<Matrix<Rational>> snap(const MatrixXd& x, const NmfOptions& opts) {
  Matrix<Rational> out(static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(x.cols()));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (!snap_to_rational(x(i, j), opts.rounding_tolerance, opts.max_denominator,
                            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j))))
        return std::nullopt;
  return out;
}

template <class T>
bool unit_block_sums(const Matrix<T>& r, const std::vector<std::size_t>& blocks, double eps) {
  for (std::size_t l = 0; l < r.cols(); ++l) {
    std::size_t off = 0;
    for (auto n : blocks) {
      T sum(0);
      for (std::size_t i = 0; i < n; ++i) {
        if (!is_nonneg(r(off + i, l), eps)) return false;
        sum += r(off + i, l);
      }
      if (!near_equal(sum, T(1), eps)) return false;
      off += n;
    }
  }
  return true;
}

// Given exact states P, solves for R >= 0 with unit block sums and R P = C
// (and R inside the column space of C when equirank).
std::optional<ModelFactorization> complete_with_effects(const CopeMatrix& c, const Matrix<Rational>& p,
                                                        bool equirank) {
  const auto& cm = c.exact();
  const std::size_t m = cm.rows(), n = cm.cols(), k = p.rows();
  for (const auto& x : p.data())
    if (sgn(x) < 0) return std::nullopt;
  Matrix<Rational> left_null;
  if (equirank) {
    left_null = kernel_basis(cm.transpose());
    for (const auto& x : (p * kernel_basis(cm)).data())
      if (sgn(x) != 0) return std::nullopt;
  }
  const std::size_t eqs = m * n + c.num_measurements() * k + (equirank ? left_null.cols() * k : 0);
  Matrix<Rational> a(eqs, m * k);
  std::vector<Rational> b(eqs);
  auto var = [&](std::size_t i, std::size_t l) { return i * k + l; };
  std::size_t e = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j, ++e) {
      for (std::size_t l = 0; l < k; ++l) a(e, var(i, l)) = p(l, j);
      b[e] = cm(i, j);
    }
  for (std::size_t blk = 0; blk < c.num_measurements(); ++blk)
    for (std::size_t l = 0; l < k; ++l, ++e) {
      for (std::size_t i = 0; i < c.block_sizes()[blk]; ++i) a(e, var(c.block_offset(blk) + i, l)) = 1;
      b[e] = 1;
    }
  if (equirank)
    for (std::size_t w = 0; w < left_null.cols(); ++w)
      for (std::size_t l = 0; l < k; ++l, ++e)
        for (std::size_t i = 0; i < m; ++i) a(e, var(i, l)) = left_null(i, w);
  auto sol = find_nonneg_solution(a, b);
  if (!sol) return std::nullopt;
  Matrix<Rational> r(m, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < k; ++l) r(i, l) = (*sol)[var(i, l)];
  auto model = make_model(equirank ? ModelKind::NoncontextualOntological : ModelKind::Ontological, c.block_sizes(),
                          std::move(r), p, std::vector<Rational>(k, Rational(1)), 0.0);
  const auto want = equirank ? ModelKind::NoncontextualOntological : ModelKind::Ontological;
  if (!classify_model(c, model).satisfies(want)) return std::nullopt;
  return model;
}

std::optional<ModelFactorization> polish(const CopeMatrix& c, const Setup& s, const Run& run, const NmfOptions& opts) {
  if (!c.is_exact()) {
    MatrixXd r = run.r.cwiseMax(0.0);
    Eigen::Index off = 0;
    for (auto b : s.blocks) {
      const auto nb = static_cast<Eigen::Index>(b);
      MatrixXd blk = r.middleRows(off, nb);
      r.middleRows(off, nb) = blk.array().rowwise() / blk.colwise().sum().array().max(1e-300);
      off += nb;
    }
    return complete_with_states(c, from_eigen(r), s.equirank);
  }
  if (auto rq = snap(run.r, opts); rq && unit_block_sums(*rq, s.blocks, 0.0))
    if (auto m = complete_with_states(c, *rq, s.equirank)) return m;
  if (s.equirank) {
    // Express R in the basis of independent columns and snap the coordinates.
    const auto& cm = c.exact();
    const auto basis_idx = independent_columns(cm);
    const Matrix<Rational> basis = cm.select_cols(basis_idx);
    const MatrixXd bf = to_eigen(to_double(basis));
    const MatrixXd x = bf.colPivHouseholderQr().solve(run.r);
    if (auto xq = snap(x, opts)) {
      Matrix<Rational> rq = basis * *xq;
      if (unit_block_sums(rq, s.blocks, 0.0))
        if (auto m = complete_with_states(c, rq, true)) return m;
    }
  }
  if (auto pq = snap(run.p, opts))
    if (auto m = complete_with_effects(c, *pq, s.equirank)) return m;
  return std::nullopt;
}

Setup make_setup(const CopeMatrix& c, std::size_t k, bool equirank) {
  Setup s;
  s.c = to_eigen(c.to_float());
  s.blocks = c.block_sizes();
  s.k = k;
  s.equirank = equirank;
  if (equirank) {
    const double eps = c.is_exact() ? kDefaultEps : c.eps();
    s.col_null = projector_complement(s.c, eps);
    s.row_null = projector_complement(s.c.transpose(), eps);
    s.beta = 1.0;
  }
  return s;
}

std::optional<ModelFactorization> heuristic(const CopeMatrix& c, std::size_t k, bool equirank,
                                            const NmfOptions& opts) {
  const Setup s = make_setup(c, k, equirank);
  for (const auto& run : run_restarts(s, opts)) {
    if (run.loss > 1e-8) break;
    if (auto m = polish(c, s, run, opts)) return m;
  }
  return std::nullopt;
}

ModelFactorization padded_trivial(const CopeMatrix& c, std::size_t k) {
  return c.visit([&](const auto& cm) {
    using T = typename std::decay_t<decltype(cm)>::value_type;
    const std::size_t n = cm.cols();
    Matrix<T> r(cm.rows(), k);
    Matrix<T> p(k, n);
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t i = 0; i < cm.rows(); ++i) r(i, l) = cm(i, l < n ? l : 0);
    for (std::size_t j = 0; j < n; ++j) p(j, j) = T(1);
    return make_model(ModelKind::Ontological, c.block_sizes(), std::move(r), std::move(p), std::vector<T>(k, T(1)),
                      c.is_exact() ? 0.0 : c.eps());
  });
}

// Distinct columns as response functions with point-mass states.
ModelFactorization distinct_columns_model(const CopeMatrix& c) {
  const auto classes = find_equivalences(c).columns;
  return c.visit([&](const auto& cm) {
    using T = typename std::decay_t<decltype(cm)>::value_type;
    std::vector<std::size_t> reps;
    for (const auto& cls : classes) reps.push_back(cls.front());
    Matrix<T> r = cm.select_cols(reps);
    Matrix<T> p(reps.size(), cm.cols());
    for (std::size_t q = 0; q < classes.size(); ++q)
      for (auto j : classes[q]) p(q, j) = T(1);
    return make_model(ModelKind::Ontological, c.block_sizes(), std::move(r), std::move(p),
                      std::vector<T>(reps.size(), T(1)), c.is_exact() ? 0.0 : c.eps());
  });
}

std::optional<ModelFactorization> as_enmf(const CopeMatrix& c, ModelFactorization m) {
  if (!classify_model(c, m).satisfies(ModelKind::NoncontextualOntological)) return std::nullopt;
  m.kind = ModelKind::NoncontextualOntological;
  return m;
}

constexpr std::size_t kSubsetBudget = 5000;

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

Matrix<Rational> columns_matrix(const std::vector<std::vector<Rational>>& cols, std::span<const std::size_t> pick,
                                std::size_t rows) {
  Matrix<Rational> r(rows, pick.size());
  for (std::size_t l = 0; l < pick.size(); ++l)
    for (std::size_t i = 0; i < rows; ++i) r(i, l) = cols[pick[l]][i];
  return r;
}

// k-subsets of the candidate response functions in lexicographic order, each completed by an exact LP.
std::optional<ModelFactorization> vertex_subsets(const CopeMatrix& c, const std::vector<std::vector<Rational>>& verts,
                                                 std::size_t k) {
  if (k > verts.size() || binomial_capped(verts.size(), k, kSubsetBudget) > kSubsetBudget) return std::nullopt;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    if (auto m = complete_with_states(c, columns_matrix(verts, pick, c.num_rows()), true)) return m;
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == verts.size() - k + i - 1) --i;
    if (i == 0) return std::nullopt;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

void check_options(const NmfOptions& opts) {
  if (opts.inner_dim < 1) throw PreconditionError("inner dimension must be at least 1");
  if (opts.max_restarts < 1) throw PreconditionError("need at least one restart");
  if (!(opts.rounding_tolerance > 0.0)) throw PreconditionError("rounding tolerance must be positive");
  if (opts.max_denominator < 1) throw PreconditionError("max denominator must be positive");
}

std::size_t restart_threads(const NmfOptions& opts) {
  if (opts.threads > 0) return opts.threads;
  if (const char* env = std::getenv("COPEKIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::optional<ModelFactorization> complete_with_states(const CopeMatrix& c, const Matrix<Rational>& r, bool equirank) {
  if (!c.is_exact()) return complete_with_states(c, to_double(r), equirank);
  const auto& cm = c.exact();
  const std::size_t m = cm.rows(), n = cm.cols(), k = r.cols();
  if (r.rows() != m) throw PreconditionError("response functions have the wrong number of rows");
  const Matrix<Rational> z = equirank ? kernel_basis(cm) : Matrix<Rational>(n, 0);
  // Columns of P decouple unless the row-space constraint ties them.
  const std::size_t eqs = m * n + k * z.cols();
  Matrix<Rational> a(eqs, k * n);
  std::vector<Rational> b(eqs);
  auto var = [&](std::size_t l, std::size_t j) { return l * n + j; };
  std::size_t e = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j, ++e) {
      for (std::size_t l = 0; l < k; ++l) a(e, var(l, j)) = r(i, l);
      b[e] = cm(i, j);
    }
  for (std::size_t w = 0; w < z.cols(); ++w)
    for (std::size_t l = 0; l < k; ++l, ++e)
      for (std::size_t j = 0; j < n; ++j) a(e, var(l, j)) = z(j, w);
  auto sol = find_nonneg_solution(a, b);
  if (!sol) return std::nullopt;
  Matrix<Rational> p(k, n);
  for (std::size_t l = 0; l < k; ++l)
    for (std::size_t j = 0; j < n; ++j) p(l, j) = (*sol)[var(l, j)];
  const auto want = equirank ? ModelKind::NoncontextualOntological : ModelKind::Ontological;
  auto model = make_model(want, c.block_sizes(), r, std::move(p), std::vector<Rational>(k, Rational(1)), 0.0);
  if (!classify_model(c, model).satisfies(want)) return std::nullopt;
  return model;
}

std::optional<ModelFactorization> complete_with_states(const CopeMatrix& c, const Matrix<double>& r, bool equirank) {
  const Matrix<double> cm = c.to_float();
  const double eps = c.is_exact() ? kDefaultEps : c.eps();
  const std::size_t m = cm.rows(), n = cm.cols(), k = r.cols();
  if (r.rows() != m) throw PreconditionError("response functions have the wrong number of rows");
  Matrix<double> z(n, 0);
  if (equirank) z = kernel_basis(cm, eps);
  const std::size_t eqs = m * n + k * z.cols();
  Matrix<double> a(eqs, k * n);
  std::vector<double> b(eqs);
  auto var = [&](std::size_t l, std::size_t j) { return l * n + j; };
  std::size_t e = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j, ++e) {
      for (std::size_t l = 0; l < k; ++l) a(e, var(l, j)) = r(i, l);
      b[e] = cm(i, j);
    }
  for (std::size_t w = 0; w < z.cols(); ++w)
    for (std::size_t l = 0; l < k; ++l, ++e)
      for (std::size_t j = 0; j < n; ++j) a(e, var(l, j)) = z(j, w);
  auto sol = find_nonneg_solution(a, b, eps);
  if (!sol) return std::nullopt;
  Matrix<double> p(k, n);
  for (std::size_t l = 0; l < k; ++l)
    for (std::size_t j = 0; j < n; ++j) p(l, j) = std::max(0.0, (*sol)[var(l, j)]);
  const auto want = equirank ? ModelKind::NoncontextualOntological : ModelKind::Ontological;
  auto model = make_model(want, c.block_sizes(), r, std::move(p), std::vector<double>(k, 1.0), eps);
  if (!classify_model(c, model).satisfies(want)) return std::nullopt;
  return model;
}

std::optional<ModelFactorization> nmf(const CopeMatrix& c, const NmfOptions& opts) {
  require_valid(c);
  check_options(opts);
  const std::size_t k = opts.inner_dim;
  if (k >= c.num_preparations()) return padded_trivial(c, k);
  if (k < rank(c)) return std::nullopt;
  if (find_equivalences(c).columns.size() <= k) {
    auto m = distinct_columns_model(c);
    if (m.inner_dim() == k) return m;
  }
  if (auto m = heuristic(c, k, false, opts)) return m;
  // An equirank model of size k is in particular an ontological one.
  if (c.is_exact() && c.num_rows() <= 64) {
    auto verts = response_candidates(c);
    if (auto m = vertex_subsets(c, verts, k)) {
      m->kind = ModelKind::Ontological;
      return m;
    }
  }
  return std::nullopt;
}

EnmfSearch enmf_search(const CopeMatrix& c, const NmfOptions& opts) {
  require_valid(c);
  check_options(opts);
  EnmfSearch out;
  const std::size_t r = rank(c);
  out.k_first = r;
  out.k_last = opts.max_inner_dim.value_or(r + 3);
  if (out.k_last < r) out.k_last = r;
  if (out.k_last - r > kMaxEnmfSpan)
    throw GuardExceeded("ENMF search over " + std::to_string(out.k_last - r + 1) + " inner dimensions exceeds " +
                        std::to_string(kMaxEnmfSpan + 1));

  // Exact inputs: all candidates at once (they include every vertex of Q) give a complete feasibility test.
  std::optional<std::vector<std::vector<Rational>>> verts;
  std::optional<ModelFactorization> full;
  if (c.is_exact() && c.num_rows() <= 64) {
    verts = response_candidates(c);
    std::vector<std::size_t> all(verts->size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    full = complete_with_states(c, columns_matrix(*verts, all, c.num_rows()), true);
    if (!full) return out;
  }

  const std::size_t distinct = find_equivalences(c).columns.size();
  for (std::size_t k = r; k <= out.k_last; ++k) {
    if (k == distinct)
      if (auto m = as_enmf(c, distinct_columns_model(c))) {
        out.model = std::move(m);
        return out;
      }
    if (verts)
      if (auto m = vertex_subsets(c, *verts, k)) {
        out.model = std::move(m);
        return out;
      }
    if (k < c.num_preparations() || !c.is_exact()) {
      NmfOptions o = opts;
      o.inner_dim = k;
      if (auto m = heuristic(c, k, true, o)) {
        out.model = std::move(m);
        return out;
      }
    }
  }
  if (full) {
    // Drop response functions that carry no weight.
    const auto& f = full->exact();
    std::vector<std::size_t> used;
    for (std::size_t l = 0; l < f.states.rows(); ++l)
      for (std::size_t j = 0; j < f.states.cols(); ++j)
        if (sgn(f.states(l, j)) != 0) {
          used.push_back(l);
          break;
        }
    auto m = make_model(ModelKind::NoncontextualOntological, c.block_sizes(), f.effects.select_cols(used),
                        f.states.select_rows(used), std::vector<Rational>(used.size(), Rational(1)), 0.0);
    out.k_last = std::max(out.k_last, used.size());
    out.model = as_enmf(c, std::move(m));
    if (!out.model) out.model = std::move(full);
  }
  return out;
}

std::optional<ModelFactorization> enmf(const CopeMatrix& c, const NmfOptions& opts) {
  return enmf_search(c, opts).model;
}

}  // namespace copekit
