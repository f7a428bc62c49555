#include "copekit/cope.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "copekit/linalg.hpp"
#include "copekit/lp.hpp"

namespace copekit {

namespace {

template <class T>
Matrix<T> stack_blocks(const std::vector<Matrix<T>>& blocks, std::vector<std::size_t>& sizes) {
  if (blocks.empty()) return {};
  const std::size_t cols = blocks.front().cols();
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) throw PreconditionError("measurement blocks disagree on the number of preparations");
    rows += b.rows();
    sizes.push_back(b.rows());
  }
  Matrix<T> out(rows, cols);
  std::size_t r = 0;
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.rows(); ++i, ++r)
      for (std::size_t j = 0; j < cols; ++j) out(r, j) = b(i, j);
  return out;
}

template <class T>
bool columns_equal(const Matrix<T>& m, std::size_t a, std::size_t b, double eps) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!near_equal(m(i, a), m(i, b), eps)) return false;
  return true;
}

template <class T>
bool rows_equal(const Matrix<T>& m, std::size_t a, std::size_t b, double eps) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!near_equal(m(a, j), m(b, j), eps)) return false;
  return true;
}

template <class Same>
Partition group(std::size_t n, Same same) {
  Partition classes;
  std::vector<bool> assigned(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> cls{i};
    assigned[i] = true;
    for (std::size_t j = i + 1; j < n; ++j)
      if (!assigned[j] && same(i, j)) {
        cls.push_back(j);
        assigned[j] = true;
      }
    classes.push_back(std::move(cls));
  }
  return classes;
}

/// Rows of one block ordered lexicographically, used to match outcome bijections.
template <class T>
std::vector<std::vector<T>> canonical_block(const Matrix<T>& m, std::size_t offset, std::size_t size) {
  std::vector<std::vector<T>> rows;
  for (std::size_t i = 0; i < size; ++i) rows.push_back(m.row(offset + i));
  std::sort(rows.begin(), rows.end());
  return rows;
}

template <class T>
bool blocks_equivalent(const CopeMatrix& c, const Matrix<T>& m, std::size_t a, std::size_t b) {
  const auto& sizes = c.block_sizes();
  if (sizes[a] != sizes[b]) return false;
  auto ra = canonical_block(m, c.block_offset(a), sizes[a]);
  auto rb = canonical_block(m, c.block_offset(b), sizes[b]);
  for (std::size_t i = 0; i < ra.size(); ++i)
    for (std::size_t j = 0; j < ra[i].size(); ++j)
      if (!near_equal(ra[i][j], rb[i][j], c.eps())) return false;
  return true;
}

template <class T>
Partition block_classes(const CopeMatrix& c, const Matrix<T>& m) {
  return group(c.num_measurements(), [&](std::size_t a, std::size_t b) { return blocks_equivalent(c, m, a, b); });
}

template <class T>
bool extremal_among(const std::vector<std::vector<T>>& others, const std::vector<T>& target, double eps) {
  if (others.empty()) return true;
  return !in_convex_hull(others, target, eps);
}

template <class T>
std::vector<T> flatten_block(const Matrix<T>& m, std::size_t offset, std::size_t size) {
  std::vector<T> out;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m(offset + i, j));
  return out;
}

template <class T>
bool block_is_extremal(const CopeMatrix& c, const Matrix<T>& m, std::size_t block) {
  const auto& sizes = c.block_sizes();
  std::vector<std::vector<T>> others;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    if (b == block || sizes[b] != sizes[block] || blocks_equivalent(c, m, b, block)) continue;
    others.push_back(flatten_block(m, c.block_offset(b), sizes[b]));
  }
  return extremal_among(others, flatten_block(m, c.block_offset(block), sizes[block]), c.eps());
}

}  // namespace

// ---------------------------------------------------------------------------
// CopeMatrix

CopeMatrix::CopeMatrix(Matrix<Rational> stacked, std::vector<std::size_t> block_sizes)
    : entries_(std::move(stacked)), block_sizes_(std::move(block_sizes)) {
  default_labels();
}

CopeMatrix::CopeMatrix(Matrix<double> stacked, std::vector<std::size_t> block_sizes, double eps)
    : entries_(std::move(stacked)), block_sizes_(std::move(block_sizes)), eps_(eps) {
  if (!(eps >= 0.0)) throw PreconditionError("eps must be nonnegative");
  default_labels();
}

CopeMatrix CopeMatrix::from_blocks(const std::vector<Matrix<Rational>>& blocks) {
  std::vector<std::size_t> sizes;
  auto stacked = stack_blocks(blocks, sizes);
  return CopeMatrix(std::move(stacked), std::move(sizes));
}

CopeMatrix CopeMatrix::from_blocks(const std::vector<Matrix<double>>& blocks, double eps) {
  std::vector<std::size_t> sizes;
  auto stacked = stack_blocks(blocks, sizes);
  return CopeMatrix(std::move(stacked), std::move(sizes), eps);
}

std::size_t CopeMatrix::num_rows() const {
  return visit([](const auto& m) { return m.rows(); });
}

std::size_t CopeMatrix::num_preparations() const {
  return visit([](const auto& m) { return m.cols(); });
}

std::size_t CopeMatrix::block_offset(std::size_t block) const {
  if (block >= block_sizes_.size()) throw PreconditionError("measurement index out of range");
  return std::accumulate(block_sizes_.begin(), block_sizes_.begin() + static_cast<std::ptrdiff_t>(block),
                         std::size_t{0});
}

std::size_t CopeMatrix::block_of_row(std::size_t row) const {
  std::size_t offset = 0;
  for (std::size_t b = 0; b < block_sizes_.size(); ++b) {
    if (row < offset + block_sizes_[b]) return b;
    offset += block_sizes_[b];
  }
  throw PreconditionError("row index out of range");
}

const Matrix<Rational>& CopeMatrix::exact() const {
  if (!is_exact()) throw PreconditionError("operation requires the rational backend");
  return std::get<Matrix<Rational>>(entries_);
}

Matrix<double> CopeMatrix::to_float() const {
  return visit([](const auto& m) { return Matrix<double>(to_double(m)); });
}

CopeMatrix CopeMatrix::as_float(double eps) const {
  CopeMatrix out(to_float(), block_sizes_, eps);
  out.prep_labels_ = prep_labels_;
  out.measurement_labels_ = measurement_labels_;
  out.outcome_labels_ = outcome_labels_;
  return out;
}

void CopeMatrix::default_labels() {
  prep_labels_.clear();
  for (std::size_t j = 0; j < num_preparations(); ++j) prep_labels_.push_back("P" + std::to_string(j + 1));
  measurement_labels_.clear();
  outcome_labels_.clear();
  for (std::size_t b = 0; b < block_sizes_.size(); ++b) {
    measurement_labels_.push_back("M" + std::to_string(b + 1));
    std::vector<std::string> outs;
    for (std::size_t k = 0; k < block_sizes_[b]; ++k) outs.push_back(std::to_string(k + 1));
    outcome_labels_.push_back(std::move(outs));
  }
}

void CopeMatrix::set_labels(std::vector<std::string> preparations, std::vector<std::string> measurements,
                            std::vector<std::vector<std::string>> outcomes) {
  if (preparations.size() != num_preparations()) throw PreconditionError("preparation label count mismatch");
  if (measurements.size() != num_measurements()) throw PreconditionError("measurement label count mismatch");
  if (outcomes.size() != num_measurements()) throw PreconditionError("outcome label block count mismatch");
  for (std::size_t b = 0; b < outcomes.size(); ++b)
    if (outcomes[b].size() != block_sizes_[b]) throw PreconditionError("outcome label count mismatch");
  prep_labels_ = std::move(preparations);
  measurement_labels_ = std::move(measurements);
  outcome_labels_ = std::move(outcomes);
}

bool CopeMatrix::same_entries(const CopeMatrix& other) const {
  return block_sizes_ == other.block_sizes_ && entries_ == other.entries_;
}

bool CopeMatrix::operator==(const CopeMatrix& other) const {
  return same_entries(other) && eps_ == other.eps_ && prep_labels_ == other.prep_labels_ &&
         measurement_labels_ == other.measurement_labels_ && outcome_labels_ == other.outcome_labels_;
}

// ---------------------------------------------------------------------------
// Operations

std::vector<Violation> validate(const CopeMatrix& c) {
  std::vector<Violation> out;
  if (c.num_measurements() == 0 || c.num_preparations() == 0 || c.num_rows() == 0) {
    out.push_back({Violation::Kind::Empty, 0, 0, 0, "matrix needs at least one measurement and one preparation"});
    return out;
  }
  const std::size_t declared = std::accumulate(c.block_sizes().begin(), c.block_sizes().end(), std::size_t{0});
  if (declared != c.num_rows()) {
    out.push_back({Violation::Kind::Shape, 0, 0, 0,
                   "block sizes sum to " + std::to_string(declared) + " but the matrix has " +
                       std::to_string(c.num_rows()) + " rows"});
    return out;
  }
  for (std::size_t b = 0; b < c.num_measurements(); ++b)
    if (c.block_sizes()[b] == 0)
      out.push_back({Violation::Kind::Empty, b, 0, 0, "measurement " + std::to_string(b) + " has no outcomes"});

  c.visit([&](const auto& m) {
    using T = typename std::decay_t<decltype(m)>::value_type;
    const double eps = c.eps();
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const T& x = m(i, j);
        if (!is_nonneg(x, eps) || !is_nonneg(T(1) - x, eps)) {
          std::ostringstream msg;
          msg << "entry (block " << c.block_of_row(i) << ", row " << i << ", column " << j << ") = "
              << to_double(x) << " is outside [0, 1]";
          out.push_back({Violation::Kind::EntryOutOfRange, c.block_of_row(i), i, j, msg.str()});
        }
      }
    for (std::size_t b = 0; b < c.num_measurements(); ++b) {
      const std::size_t off = c.block_offset(b);
      for (std::size_t j = 0; j < m.cols(); ++j) {
        T sum(0);
        for (std::size_t i = 0; i < c.block_sizes()[b]; ++i) sum += m(off + i, j);
        if (!near_equal(sum, T(1), eps * static_cast<double>(std::max<std::size_t>(1, c.block_sizes()[b])))) {
          std::ostringstream msg;
          msg << "column " << j << " of block " << b << " sums to " << to_double(sum) << ", expected 1";
          out.push_back({Violation::Kind::ColumnSum, b, off, j, msg.str()});
        }
      }
    }
  });
  return out;
}

void require_valid(const CopeMatrix& c) {
  auto report = validate(c);
  if (!report.empty()) throw PreconditionError("invalid COPE matrix: " + report.front().message);
}

std::size_t rank(const CopeMatrix& c) {
  return c.visit([&](const auto& m) { return rank(m, c.eps()); });
}

Equivalences find_equivalences(const CopeMatrix& c) {
  return c.visit([&](const auto& m) {
    Equivalences eq;
    const double eps = c.eps();
    eq.columns = group(m.cols(), [&](std::size_t a, std::size_t b) { return columns_equal(m, a, b, eps); });
    eq.rows = group(m.rows(), [&](std::size_t a, std::size_t b) { return rows_equal(m, a, b, eps); });
    eq.blocks = block_classes(c, m);
    return eq;
  });
}

bool is_extremal_column(const CopeMatrix& c, std::size_t j) {
  if (j >= c.num_preparations()) throw PreconditionError("column index out of range");
  return c.visit([&](const auto& m) {
    using T = typename std::decay_t<decltype(m)>::value_type;
    std::vector<std::vector<T>> others;
    for (std::size_t k = 0; k < m.cols(); ++k)
      if (k != j && !columns_equal(m, k, j, c.eps())) others.push_back(m.col(k));
    return extremal_among(others, m.col(j), c.eps());
  });
}

bool is_extremal_row(const CopeMatrix& c, std::size_t i) {
  if (i >= c.num_rows()) throw PreconditionError("row index out of range");
  return c.visit([&](const auto& m) {
    using T = typename std::decay_t<decltype(m)>::value_type;
    std::vector<std::vector<T>> others;
    for (std::size_t k = 0; k < m.rows(); ++k)
      if (k != i && !rows_equal(m, k, i, c.eps())) others.push_back(m.row(k));
    return extremal_among(others, m.row(i), c.eps());
  });
}

QuotientReport quotient_extremal(const CopeMatrix& c) {
  require_valid(c);
  const auto eq = find_equivalences(c);

  std::vector<std::size_t> kept_columns, dropped_columns;
  for (const auto& cls : eq.columns) {
    if (is_extremal_column(c, cls.front()))
      kept_columns.push_back(cls.front());
    else
      dropped_columns.insert(dropped_columns.end(), cls.begin(), cls.end());
  }
  std::sort(kept_columns.begin(), kept_columns.end());
  std::sort(dropped_columns.begin(), dropped_columns.end());

  std::vector<std::size_t> all_measurements(c.num_measurements());
  std::iota(all_measurements.begin(), all_measurements.end(), 0);
  CopeMatrix by_columns = restrict_fragment(c, {kept_columns, all_measurements});

  Partition measurement_classes =
      by_columns.visit([&](const auto& m) { return block_classes(by_columns, m); });
  std::vector<std::size_t> kept_measurements, dropped_rows;
  for (const auto& cls : measurement_classes) {
    const bool extremal = by_columns.visit([&](const auto& m) { return block_is_extremal(by_columns, m, cls.front()); });
    if (extremal) {
      kept_measurements.push_back(cls.front());
    } else {
      for (auto b : cls)
        for (std::size_t i = 0; i < c.block_sizes()[b]; ++i) dropped_rows.push_back(c.block_offset(b) + i);
    }
  }
  std::sort(kept_measurements.begin(), kept_measurements.end());
  std::sort(dropped_rows.begin(), dropped_rows.end());

  std::vector<std::size_t> all_columns(by_columns.num_preparations());
  std::iota(all_columns.begin(), all_columns.end(), 0);
  CopeMatrix quotiented = restrict_fragment(by_columns, {all_columns, kept_measurements});

  return QuotientReport{std::move(quotiented), eq.columns,     std::move(measurement_classes),
                        dropped_columns,       dropped_rows,   kept_columns,
                        kept_measurements};
}

CopeMatrix restrict_fragment(const CopeMatrix& parent, const FragmentRestriction& r) {
  auto check = [](const std::vector<std::size_t>& idx, std::size_t bound, const char* what) {
    if (idx.empty()) throw PreconditionError(std::string("fragment keeps no ") + what);
    std::vector<bool> seen(bound, false);
    for (auto i : idx) {
      if (i >= bound) throw PreconditionError(std::string(what) + " index " + std::to_string(i) + " out of range");
      if (seen[i]) throw PreconditionError(std::string("duplicate ") + what + " index " + std::to_string(i));
      seen[i] = true;
    }
  };
  check(r.kept_preparations, parent.num_preparations(), "preparation");
  check(r.kept_measurements, parent.num_measurements(), "measurement");

  std::vector<std::size_t> rows, sizes;
  for (auto b : r.kept_measurements) {
    const std::size_t off = parent.block_offset(b);
    for (std::size_t i = 0; i < parent.block_sizes()[b]; ++i) rows.push_back(off + i);
    sizes.push_back(parent.block_sizes()[b]);
  }

  CopeMatrix out = parent.visit([&](const auto& m) {
    auto sub = m.select_rows(rows).select_cols(r.kept_preparations);
    using T = typename std::decay_t<decltype(m)>::value_type;
    if constexpr (std::is_same_v<T, Rational>)
      return CopeMatrix(std::move(sub), sizes);
    else
      return CopeMatrix(std::move(sub), sizes, parent.eps());
  });

  std::vector<std::string> preps, meas;
  std::vector<std::vector<std::string>> outs;
  for (auto j : r.kept_preparations) preps.push_back(parent.preparation_labels()[j]);
  for (auto b : r.kept_measurements) {
    meas.push_back(parent.measurement_labels()[b]);
    outs.push_back(parent.outcome_labels()[b]);
  }
  out.set_labels(std::move(preps), std::move(meas), std::move(outs));
  return out;
}

CopeMatrix merge_measurements(const CopeMatrix& c) {
  if (c.num_measurements() <= 1) return c;
  const std::size_t j = c.num_measurements();
  CopeMatrix out = c.visit([&](const auto& m) {
    using T = typename std::decay_t<decltype(m)>::value_type;
    auto scaled = m;
    if constexpr (std::is_same_v<T, Rational>) {
      scaled *= make_rational(1, static_cast<long>(j));
      return CopeMatrix(std::move(scaled), {m.rows()});
    } else {
      scaled *= 1.0 / static_cast<double>(j);
      return CopeMatrix(std::move(scaled), {m.rows()}, c.eps());
    }
  });
  std::vector<std::string> outcomes;
  for (std::size_t b = 0; b < j; ++b)
    for (const auto& o : c.outcome_labels()[b]) outcomes.push_back(c.measurement_labels()[b] + ":" + o);
  std::string name;
  for (std::size_t b = 0; b < j; ++b) name += (b ? "+" : "") + c.measurement_labels()[b];
  out.set_labels(c.preparation_labels(), {name}, {outcomes});
  return out;
}

CopeMatrix identity_cope(std::size_t n) {
  if (n == 0) throw PreconditionError("identity COPE needs at least one outcome");
  return CopeMatrix(Matrix<Rational>::identity(n), {n});
}

}  // namespace copekit
