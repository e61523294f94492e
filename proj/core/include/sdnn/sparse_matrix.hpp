#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sdnn {

using ColIndex = std::uint32_t;
using Offset = std::uint64_t;

/// One stored entry in external (1-based) coordinates.
struct Triple {
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  double value = 0.0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Raw compressed-sparse-row arrays with no invariants attached. This is what
/// decoders and kernels assemble before handing ownership to a SparseMatrix.
struct CsrParts {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<Offset> row_offsets;
  std::vector<ColIndex> col_indices;
  std::vector<double> values;
};

/// Outcome of an invariant check: empty message means valid.
struct Validation {
  std::string violation;

  bool ok() const noexcept { return violation.empty(); }
  explicit operator bool() const noexcept { return ok(); }
};

Validation validate(const CsrParts& parts);

/// Canonical CSR matrix of doubles.
///
/// Invariants, enforced at construction: row offsets start at 0, never
/// decrease and end at nnz; columns within a row are strictly increasing and
/// below n_cols; every stored value is finite and non-zero. Instances are
/// immutable and may be shared freely between threads.
class SparseMatrix {
 public:
  SparseMatrix() : SparseMatrix(0, 0) {}
  /// Empty (all-zero) matrix of the given shape.
  SparseMatrix(std::size_t n_rows, std::size_t n_cols);

  /// Takes ownership of `parts` after validating them; throws Error(value)
  /// describing the first violation.
  static SparseMatrix adopt(CsrParts parts);

  /// Takes ownership without the O(nnz) check. For producers that construct
  /// canonical output by design (kernels, generators); debug builds still check.
  static SparseMatrix adopt_trusted(CsrParts parts);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const Offset> row_offsets() const noexcept { return row_offsets_; }
  std::span<const ColIndex> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::size_t row_nnz(std::size_t row) const noexcept {
    return static_cast<std::size_t>(row_offsets_[row + 1] - row_offsets_[row]);
  }
  std::span<const ColIndex> row_cols(std::size_t row) const noexcept {
    return std::span<const ColIndex>(col_indices_).subspan(row_offsets_[row], row_nnz(row));
  }
  std::span<const double> row_values(std::size_t row) const noexcept {
    return std::span<const double>(values_).subspan(row_offsets_[row], row_nnz(row));
  }

  /// Value at 0-based (row, col), 0.0 when not stored. Binary search per call.
  double at(std::size_t row, std::size_t col) const;

  CsrParts release() &&;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  explicit SparseMatrix(CsrParts&& parts);

  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<Offset> row_offsets_;
  std::vector<ColIndex> col_indices_;
  std::vector<double> values_;
};

Validation validate(const SparseMatrix& m);

/// Builds a canonical matrix from 1-based triples in any order.
/// Throws Error(bounds) for an index outside [1, n], Error(duplicate) for a
/// repeated coordinate and Error(value) for a zero or non-finite value.
SparseMatrix build_from_triples(std::span<const Triple> triples, std::size_t n_rows,
                                std::size_t n_cols);

/// 1-based triples in row-major, column-ascending order.
std::vector<Triple> to_triples(const SparseMatrix& m);

/// Activation batch: one row per image, one column per neuron.
class FeatureBatch {
 public:
  FeatureBatch() = default;
  explicit FeatureBatch(SparseMatrix data) : data_(std::move(data)) {}

  const SparseMatrix& matrix() const noexcept { return data_; }
  std::size_t images() const noexcept { return data_.n_rows(); }
  std::size_t neurons() const noexcept { return data_.n_cols(); }

  /// True when every stored value is exactly 1 (the state of a fresh input).
  bool is_binary() const noexcept;

  friend bool operator==(const FeatureBatch&, const FeatureBatch&) = default;

 private:
  SparseMatrix data_;
};

/// Sorted set of 1-based image rows.
class CategorySet {
 public:
  CategorySet() = default;
  /// Requires strictly increasing indices >= 1; throws Error(duplicate) on a
  /// repeat and Error(value) on a zero or out-of-order index.
  explicit CategorySet(std::vector<std::uint64_t> rows);

  std::span<const std::uint64_t> rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  bool contains(std::uint64_t row) const;

  /// Elements of *this that are not in `other`.
  CategorySet minus(const CategorySet& other) const;

  friend bool operator==(const CategorySet&, const CategorySet&) = default;

 private:
  std::vector<std::uint64_t> rows_;
};

}  // namespace sdnn
