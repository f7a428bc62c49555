#pragma once

#include <string>
#include <variant>
#include <vector>

#include "copekit/errors.hpp"
#include "copekit/matrix.hpp"

namespace copekit {

enum class Backend { Rational, Float };

/// Matrix of conditional outcome probabilities of events.
///
/// Rows are outcomes grouped into one contiguous block per measurement,
/// columns are preparations. Each block is column-stochastic when valid.
/// Construction does not validate; see validate().
class CopeMatrix {
 public:
  using Entries = std::variant<Matrix<Rational>, Matrix<double>>;

  CopeMatrix(Matrix<Rational> stacked, std::vector<std::size_t> block_sizes);
  CopeMatrix(Matrix<double> stacked, std::vector<std::size_t> block_sizes, double eps = kDefaultEps);

  /// Builds from one matrix per measurement.
  static CopeMatrix from_blocks(const std::vector<Matrix<Rational>>& blocks);
  static CopeMatrix from_blocks(const std::vector<Matrix<double>>& blocks, double eps = kDefaultEps);

  Backend backend() const { return std::holds_alternative<Matrix<Rational>>(entries_) ? Backend::Rational : Backend::Float; }
  bool is_exact() const { return backend() == Backend::Rational; }
  double eps() const { return eps_; }

  std::size_t num_rows() const;
  std::size_t num_preparations() const;
  std::size_t num_measurements() const { return block_sizes_.size(); }
  const std::vector<std::size_t>& block_sizes() const { return block_sizes_; }
  std::size_t block_offset(std::size_t block) const;
  /// Block index owning a stacked row.
  std::size_t block_of_row(std::size_t row) const;

  const Entries& entries() const { return entries_; }
  /// Throws PreconditionError on the float backend.
  const Matrix<Rational>& exact() const;
  Matrix<double> to_float() const;
  /// Same matrix and labels on the float backend.
  CopeMatrix as_float(double eps = kDefaultEps) const;

  const std::vector<std::string>& preparation_labels() const { return prep_labels_; }
  const std::vector<std::string>& measurement_labels() const { return measurement_labels_; }
  const std::vector<std::vector<std::string>>& outcome_labels() const { return outcome_labels_; }
  void set_labels(std::vector<std::string> preparations, std::vector<std::string> measurements,
                  std::vector<std::vector<std::string>> outcomes);

  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), entries_);
  }

  /// Backend, shape and entries agree (labels are ignored).
  bool same_entries(const CopeMatrix& other) const;
  bool operator==(const CopeMatrix& other) const;

 private:
  void default_labels();

  Entries entries_;
  std::vector<std::size_t> block_sizes_;
  double eps_ = kDefaultEps;
  std::vector<std::string> prep_labels_;
  std::vector<std::string> measurement_labels_;
  std::vector<std::vector<std::string>> outcome_labels_;
};

struct Violation {
  enum class Kind { Empty, EntryOutOfRange, ColumnSum, Shape };
  Kind kind;
  std::size_t block = 0;
  std::size_t row = 0;     // stacked row index; unused for ColumnSum
  std::size_t column = 0;
  std::string message;
};

/// Lists every broken invariant. An empty report means the matrix is valid.
std::vector<Violation> validate(const CopeMatrix& c);

/// Throws PreconditionError naming the first violation.
void require_valid(const CopeMatrix& c);

/// Rank of the stacked matrix (exact Bareiss, or SVD with eps relative cutoff).
std::size_t rank(const CopeMatrix& c);

using Partition = std::vector<std::vector<std::size_t>>;

struct Equivalences {
  Partition columns;   // identical preparations
  Partition rows;      // identical outcome rows, across all blocks
  Partition blocks;    // measurements equal up to an outcome bijection
};

/// Classes are sorted by their smallest member; members ascend.
Equivalences find_equivalences(const CopeMatrix& c);

/// True iff no convex combination of the columns distinct from column j
/// reproduces it. Identical copies of j do not count as "other" columns.
bool is_extremal_column(const CopeMatrix& c, std::size_t j);
/// Row analogue over all stacked rows.
bool is_extremal_row(const CopeMatrix& c, std::size_t i);

struct QuotientReport {
  CopeMatrix quotiented;
  Partition column_classes;
  Partition measurement_classes;
  std::vector<std::size_t> dropped_columns;   // nonextremal preparations
  std::vector<std::size_t> dropped_rows;      // rows of dropped nonextremal measurements
  std::vector<std::size_t> kept_columns;      // representatives, in order
  std::vector<std::size_t> kept_measurements;
};

/// Extremal quotient: keeps one representative (lowest index) per class of
/// identical extremal columns and of equivalent extremal measurements, drops
/// convexly dependent columns and measurements. Identical rows inside distinct
/// retained measurements are kept.
QuotientReport quotient_extremal(const CopeMatrix& c);

struct FragmentRestriction {
  std::vector<std::size_t> kept_preparations;
  std::vector<std::size_t> kept_measurements;
};

/// Submatrix on the kept measurements (whole blocks) and kept preparations,
/// in the order given.
CopeMatrix restrict_fragment(const CopeMatrix& parent, const FragmentRestriction& r);

/// Stacks all blocks into a single measurement scaled by 1/J.
CopeMatrix merge_measurements(const CopeMatrix& c);

/// n-outcome single measurement with the n x n identity matrix.
CopeMatrix identity_cope(std::size_t n);

}  // namespace copekit
