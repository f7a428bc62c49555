#include "copekit/factorizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "copekit/linalg.hpp"

namespace copekit {

namespace {

/// Adds a constant to each block of x so all block sums agree, with the
/// smallest change in Euclidean norm.
void equalize_block_sums(Eigen::Ref<Eigen::VectorXd> x, const std::vector<std::size_t>& blocks) {
  std::vector<double> sums;
  double weighted = 0.0, weights = 0.0;
  std::size_t off = 0;
  for (auto n : blocks) {
    double s = x.segment(static_cast<Eigen::Index>(off), static_cast<Eigen::Index>(n)).sum();
    sums.push_back(s);
    weighted += s / static_cast<double>(n);
    weights += 1.0 / static_cast<double>(n);
    off += n;
  }
  const double target = weighted / weights;
  off = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const double delta = (target - sums[b]) / static_cast<double>(blocks[b]);
    x.segment(static_cast<Eigen::Index>(off), static_cast<Eigen::Index>(blocks[b])).array() += delta;
    off += blocks[b];
  }
}

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

Matrix<double> from_eigen(const Eigen::MatrixXd& e) {
  Matrix<double> m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

struct SvdSplit {
  Eigen::MatrixXd effects;  // m x m
  Eigen::MatrixXd states;   // m x n
  std::size_t rank = 0;
};

SvdSplit svd_split(const CopeMatrix& c) {
  const Eigen::MatrixXd a = to_eigen(c.to_float());
  const auto m = a.rows(), n = a.cols();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd u = svd.matrixU();
  Eigen::MatrixXd v = svd.matrixV();
  const auto& s = svd.singularValues();
  const double eps = c.is_exact() ? kDefaultEps : c.eps();
  const double cutoff = s.size() ? eps * s(0) : 0.0;

  SvdSplit out;
  out.states = Eigen::MatrixXd::Zero(m, n);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cutoff) continue;
    ++out.rank;
    // Sign convention: the first block sum of each effect column is nonnegative.
    double first_block = u.col(i).head(static_cast<Eigen::Index>(c.block_sizes().front())).sum();
    if (std::abs(first_block) <= 1e-12) {
      Eigen::Index k = 0;
      u.col(i).cwiseAbs().maxCoeff(&k);
      first_block = u(k, i);
    }
    if (first_block < 0) {
      u.col(i) = -u.col(i);
      v.col(i) = -v.col(i);
    }
    out.states.row(i) = s(i) * v.col(i).transpose();
  }
  for (Eigen::Index i = static_cast<Eigen::Index>(out.rank); i < m; ++i)
    equalize_block_sums(u.col(i), c.block_sizes());
  out.effects = u;
  return out;
}

template <class T>
std::vector<T> ones(std::size_t n) {
  return std::vector<T>(n, T(1));
}

template <class T>
ModelFactorization quasi_impl(const ModelFactorization& g, const Factors<T>& f, const Matrix<T>& t) {
  if (t.rows() != t.cols() || t.rows() != f.effects.cols())
    throw PreconditionError("change of basis must be square of the GPT inner dimension");
  auto inv = inverse(t, g.eps);
  if (!inv) throw PreconditionError("tomographic columns are linearly dependent (singular transform)");
  Matrix<T> effects = f.effects * t;
  Matrix<T> states = *inv * f.states;
  std::vector<T> unit(t.cols(), T(0));
  for (std::size_t j = 0; j < t.cols(); ++j)
    for (std::size_t i = 0; i < t.rows(); ++i) unit[j] += f.unit[i] * t(i, j);
  return make_model(ModelKind::Quasiprobabilistic, g.block_sizes, std::move(effects), std::move(states),
                    std::move(unit), g.eps);
}

}  // namespace

ModelFactorization pregpt_from_svd(const CopeMatrix& c) {
  require_valid(c);
  auto split = svd_split(c);
  Matrix<double> effects = from_eigen(split.effects);
  Matrix<double> states = from_eigen(split.states);
  const double eps = c.is_exact() ? kDefaultEps : c.eps();
  // Average the per-block sums to absorb rounding.
  std::vector<double> unit(effects.cols(), 0.0);
  std::size_t off = 0;
  for (auto n : c.block_sizes()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < effects.cols(); ++j) unit[j] += effects(off + i, j);
    off += n;
  }
  for (auto& x : unit) x /= static_cast<double>(c.num_measurements());
  return make_model(ModelKind::PreGPT, c.block_sizes(), std::move(effects), std::move(states), std::move(unit), eps);
}

ModelFactorization gpt(const CopeMatrix& c) {
  require_valid(c);
  if (c.is_exact()) {
    auto rf = rank_factorization(c.exact());
    auto unit = common_block_sum(rf.left, c.block_sizes(), 0.0);
    return make_model(ModelKind::GPT, c.block_sizes(), std::move(rf.left), std::move(rf.right), std::move(unit), 0.0);
  }
  auto split = svd_split(c);
  const auto r = static_cast<Eigen::Index>(split.rank);
  Matrix<double> effects = from_eigen(split.effects.leftCols(r));
  Matrix<double> states = from_eigen(split.states.topRows(r));
  std::vector<double> unit(effects.cols(), 0.0);
  std::size_t off = 0;
  for (auto n : c.block_sizes()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < effects.cols(); ++j) unit[j] += effects(off + i, j);
    off += n;
  }
  for (auto& x : unit) x /= static_cast<double>(c.num_measurements());
  return make_model(ModelKind::GPT, c.block_sizes(), std::move(effects), std::move(states), std::move(unit), c.eps());
}

ModelFactorization quasi_from_gpt(const ModelFactorization& g, std::span<const std::size_t> tom_columns) {
  if (tom_columns.size() != g.inner_dim())
    throw PreconditionError("need exactly inner_dim tomographic columns, got " + std::to_string(tom_columns.size()));
  for (auto j : tom_columns)
    if (j >= g.num_preparations()) throw PreconditionError("tomographic column index out of range");
  return g.visit([&](const auto& f) { return quasi_impl(g, f, f.states.select_cols(tom_columns)); });
}

ModelFactorization quasi_from_transform(const ModelFactorization& g, const Matrix<Rational>& t) {
  if (g.is_exact()) return quasi_impl(g, g.exact(), t);
  return quasi_impl(g, std::get<Factors<double>>(g.factors), to_double(t));
}

ModelFactorization quasi_from_transform(const ModelFactorization& g, const Matrix<double>& t) {
  return quasi_impl(g, g.to_float(), t);
}

ModelFactorization trivial_ontological(const CopeMatrix& c) {
  require_valid(c);
  const std::size_t n = c.num_preparations();
  return c.visit([&](const auto& m) {
    using T = typename std::decay_t<decltype(m)>::value_type;
    return make_model(ModelKind::Ontological, c.block_sizes(), m, Matrix<T>::identity(n), ones<T>(n),
                      c.is_exact() ? 0.0 : c.eps());
  });
}

ModelFactorization gpt_to_trivial_ontological(const ModelFactorization& g, const CopeMatrix& c) {
  require_valid(c);
  if (!classify_model(c, g).reconstruction_ok) throw PreconditionError("GPT does not reproduce the COPE matrix");
  // xi_i(j) = <e_i, rho_j> for every GPT state rho_j.
  auto xi = g.visit([](const auto& f) { return CopeMatrix::Entries(f.effects * f.states); });
  const bool same = std::visit(
      [&](const auto& r) {
        using T = typename std::decay_t<decltype(r)>::value_type;
        if constexpr (std::is_same_v<T, Rational>) {
          if (c.is_exact()) return r == c.exact();
          return near_equal(to_double(r), c.to_float(), c.eps());
        } else {
          return near_equal(r, c.to_float(), c.is_exact() ? g.eps : c.eps());
        }
      },
      xi);
  if (!same) throw PreconditionError("GPT response functions disagree with the COPE rows");
  // Point masses on the extremal GPT states.
  return trivial_ontological(c);
}

FiducialTomography fiducial_tomography_test(const CopeMatrix& c) {
  require_valid(c);
  const std::size_t r = rank(c);
  const std::size_t distinct_rows = find_equivalences(c).rows.size();
  return {c.num_preparations() > r, distinct_rows > r};
}

}  // namespace copekit
