#include "sdnn/sparse_matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sdnn/errors.hpp"

namespace sdnn {

namespace {

struct CsrView {
  std::size_t n_rows;
  std::size_t n_cols;
  std::span<const Offset> row_offsets;
  std::span<const ColIndex> col_indices;
  std::span<const double> values;
};

Validation check(const CsrView& p) {
  auto bad = [](std::string msg) { return Validation{std::move(msg)}; };

  if (p.row_offsets.size() != p.n_rows + 1) {
    return bad("row_offsets has length " + std::to_string(p.row_offsets.size()) +
               ", expected " + std::to_string(p.n_rows + 1));
  }
  if (p.col_indices.size() != p.values.size()) {
    return bad("col_indices and values lengths differ (" +
               std::to_string(p.col_indices.size()) + " vs " +
               std::to_string(p.values.size()) + ")");
  }
  if (p.row_offsets.front() != 0) {
    return bad("row_offsets[0] is " + std::to_string(p.row_offsets.front()) + ", expected 0");
  }
  for (std::size_t r = 0; r < p.n_rows; ++r) {
    if (p.row_offsets[r + 1] < p.row_offsets[r]) {
      return bad("row_offsets non-monotone at row " + std::to_string(r));
    }
  }
  if (p.row_offsets.back() != p.values.size()) {
    return bad("row_offsets[n_rows] is " + std::to_string(p.row_offsets.back()) +
               " but nnz is " + std::to_string(p.values.size()));
  }
  for (std::size_t r = 0; r < p.n_rows; ++r) {
    for (Offset k = p.row_offsets[r]; k < p.row_offsets[r + 1]; ++k) {
      const auto c = p.col_indices[k];
      auto where = [&] { return "(" + std::to_string(r) + "," + std::to_string(c) + ")"; };
      if (c >= p.n_cols) return bad("column out of range at " + where());
      if (k > p.row_offsets[r] && c <= p.col_indices[k - 1]) {
        return bad("columns not strictly increasing at " + where());
      }
      const double v = p.values[k];
      if (!std::isfinite(v)) return bad("non-finite value at " + where());
      if (v == 0.0) return bad("explicit zero at " + where());
    }
  }
  return {};
}

}  // namespace

Validation validate(const CsrParts& p) {
  return check({p.n_rows, p.n_cols, p.row_offsets, p.col_indices, p.values});
}

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols), row_offsets_(n_rows + 1, 0) {}

SparseMatrix::SparseMatrix(CsrParts&& parts)
    : n_rows_(parts.n_rows),
      n_cols_(parts.n_cols),
      row_offsets_(std::move(parts.row_offsets)),
      col_indices_(std::move(parts.col_indices)),
      values_(std::move(parts.values)) {}

SparseMatrix SparseMatrix::adopt(CsrParts parts) {
  if (auto v = validate(parts); !v) fail(ErrorKind::value, "invalid sparse matrix: " + v.violation);
  return SparseMatrix(std::move(parts));
}

SparseMatrix SparseMatrix::adopt_trusted(CsrParts parts) {
  assert(validate(parts).ok());
  return SparseMatrix(std::move(parts));
}

double SparseMatrix::at(std::size_t row, std::size_t col) const {
  if (row >= n_rows_ || col >= n_cols_) {
    fail(ErrorKind::bounds, "index (" + std::to_string(row) + "," + std::to_string(col) +
                                ") outside " + std::to_string(n_rows_) + "x" +
                                std::to_string(n_cols_));
  }
  auto cols = row_cols(row);
  auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<ColIndex>(col));
  if (it == cols.end() || *it != col) return 0.0;
  return row_values(row)[static_cast<std::size_t>(it - cols.begin())];
}

CsrParts SparseMatrix::release() && {
  CsrParts p{n_rows_, n_cols_, std::move(row_offsets_), std::move(col_indices_),
             std::move(values_)};
  n_rows_ = n_cols_ = 0;
  row_offsets_.assign(1, 0);
  return p;
}

Validation validate(const SparseMatrix& m) {
  return check({m.n_rows(), m.n_cols(), m.row_offsets(), m.col_indices(), m.values()});
}

namespace {

std::string describe(const Triple& t) {
  return "(" + std::to_string(t.row) + "," + std::to_string(t.col) + "," +
         std::to_string(t.value) + ")";
}

}  // namespace

SparseMatrix build_from_triples(std::span<const Triple> triples, std::size_t n_rows,
                                std::size_t n_cols) {
  if (n_cols > std::numeric_limits<ColIndex>::max()) {
    fail(ErrorKind::capacity, "column count " + std::to_string(n_cols) + " exceeds index width");
  }
  for (const auto& t : triples) {
    if (t.row < 1 || t.row > n_rows || t.col < 1 || t.col > n_cols) {
      fail(ErrorKind::bounds, "triple " + describe(t) + " outside " + std::to_string(n_rows) +
                                  "x" + std::to_string(n_cols));
    }
    if (!std::isfinite(t.value)) fail(ErrorKind::value, "non-finite value in triple " + describe(t));
    if (t.value == 0.0) fail(ErrorKind::value, "explicit zero in triple " + describe(t));
  }

  // Counting sort by row, then sort each row by column.
  CsrParts p;
  p.n_rows = n_rows;
  p.n_cols = n_cols;
  p.row_offsets.assign(n_rows + 1, 0);
  for (const auto& t : triples) ++p.row_offsets[t.row];
  std::partial_sum(p.row_offsets.begin(), p.row_offsets.end(), p.row_offsets.begin());

  std::vector<std::size_t> order(triples.size());
  {
    std::vector<Offset> cursor(p.row_offsets.begin(), p.row_offsets.end() - 1);
    for (std::size_t i = 0; i < triples.size(); ++i) order[cursor[triples[i].row - 1]++] = i;
  }

  p.col_indices.resize(triples.size());
  p.values.resize(triples.size());
  for (std::size_t r = 0; r < n_rows; ++r) {
    auto first = order.begin() + static_cast<std::ptrdiff_t>(p.row_offsets[r]);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(p.row_offsets[r + 1]);
    std::sort(first, last, [&](std::size_t a, std::size_t b) {
      return triples[a].col < triples[b].col;
    });
    for (auto it = first; it != last; ++it) {
      if (it != first && triples[*it].col == triples[*(it - 1)].col) {
        fail(ErrorKind::duplicate, "duplicate coordinate in triple " + describe(triples[*it]));
      }
      const auto k = static_cast<std::size_t>(it - order.begin());
      p.col_indices[k] = static_cast<ColIndex>(triples[*it].col - 1);
      p.values[k] = triples[*it].value;
    }
  }
  return SparseMatrix::adopt_trusted(std::move(p));
}

std::vector<Triple> to_triples(const SparseMatrix& m) {
  std::vector<Triple> out;
  out.reserve(m.nnz());
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out.push_back({r + 1, std::uint64_t{cols[k]} + 1, vals[k]});
    }
  }
  return out;
}

bool FeatureBatch::is_binary() const noexcept {
  auto v = data_.values();
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 1.0; });
}

CategorySet::CategorySet(std::vector<std::uint64_t> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] == 0) fail(ErrorKind::value, "category index 0 is not a valid 1-based row");
    if (i > 0 && rows_[i] == rows_[i - 1]) {
      fail(ErrorKind::duplicate, "duplicate category " + std::to_string(rows_[i]));
    }
    if (i > 0 && rows_[i] < rows_[i - 1]) {
      fail(ErrorKind::value, "category " + std::to_string(rows_[i]) + " follows " +
                                 std::to_string(rows_[i - 1]) + " (not ascending)");
    }
  }
}

bool CategorySet::contains(std::uint64_t row) const {
  return std::binary_search(rows_.begin(), rows_.end(), row);
}

CategorySet CategorySet::minus(const CategorySet& other) const {
  std::vector<std::uint64_t> out;
  std::set_difference(rows_.begin(), rows_.end(), other.rows_.begin(), other.rows_.end(),
                      std::back_inserter(out));
  CategorySet s;
  s.rows_ = std::move(out);
  return s;
}

}  // namespace sdnn
