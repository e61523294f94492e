#pragma once

// Everything around the timed kernel: categorization, the dense reference
// oracle, verification against truth, rate arithmetic and report output.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sdnn/engine.hpp"
#include "sdnn/network.hpp"
#include "sdnn/sparse_matrix.hpp"

namespace sdnn {

/// Row-major dense matrix, used only by the oracle.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

/// Size limits for the dense oracle.
struct OracleLimits {
  std::size_t max_neurons = 4096;
  /// Largest dense activation block (rows x neurons) held at once.
  std::size_t max_elements = std::size_t{1} << 25;
};

/// Throws Error(capacity) above `max_elements`.
DenseMatrix densify(const SparseMatrix& m, const OracleLimits& limits = {});
SparseMatrix sparsify(const DenseMatrix& m);

/// 1-based rows holding at least one stored entry.
CategorySet categorize(const FeatureBatch& y);
/// 1-based rows holding at least one entry > 0.
CategorySet categorize(const DenseMatrix& y);

/// Straightforward dense evaluation of every layer: full i-k-j product with
/// ascending k, bias added where the product is non-zero, then ReLU and clamp.
/// Throws Error(shape) on a width mismatch and Error(capacity) beyond `limits`.
DenseMatrix oracle_infer(const NetworkModel& model, const DenseMatrix& y0, double ymax = 32.0,
                         const OracleLimits& limits = {});

/// Truth categories from the oracle, evaluating the batch in dense row chunks
/// that respect `limits`.
CategorySet oracle_categories(const NetworkModel& model, const FeatureBatch& y0,
                              double ymax = 32.0, const OracleLimits& limits = {});

struct VerifyReport {
  bool match = true;
  CategorySet false_positives;  // computed but not in truth
  CategorySet false_negatives;  // in truth but not computed
};

VerifyReport verify(const CategorySet& computed, const CategorySet& truth);

/// inputs * connections / seconds. Throws Error(parameter) unless seconds > 0.
double rate(std::uint64_t inputs, std::uint64_t connections, double seconds);

struct BenchReport {
  std::size_t neurons = 0;
  std::size_t layers = 0;
  std::uint64_t connections = 0;
  std::uint64_t inputs = 0;
  double seconds = 0.0;
  double rate = 0.0;
  ExecutionMode mode = ExecutionMode::serial;
  std::size_t workers = 1;
  /// Free-text processor description.
  std::string machine;
  /// "ok" or a one-line failure description.
  std::string status = "ok";
};

enum class ReportFormat { tsv, json };

/// Columns: neurons, layers, connections, inputs, seconds, rate, mode,
/// workers, machine, status. TSV always starts with the header line.
void emit_report(std::span<const BenchReport> reports, ReportFormat format, std::ostream& out);

}  // namespace sdnn
