#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "sdnn/network.hpp"
#include "sdnn/sparse_matrix.hpp"

namespace sdnn {

enum class ExecutionMode { serial, data_parallel, pipeline };

const char* to_string(ExecutionMode mode) noexcept;
std::optional<ExecutionMode> parse_mode(std::string_view text) noexcept;

struct InferenceConfig {
  /// Upper saturation applied after bias.
  double ymax = 32.0;
  ExecutionMode mode = ExecutionMode::serial;
  /// Threads for data_parallel mode.
  std::size_t workers = 1;
  /// Threads (one per contiguous layer range) for pipeline mode; 0 means
  /// `workers`. Clamped to the network depth.
  std::size_t pipeline_stages = 0;
  /// Batch rows per work unit in data_parallel and pipeline modes.
  std::size_t batch_tile = 512;

  /// Throws Error(parameter).
  void validate() const;
};

/// Z = Y * W. Each output entry sums its products in ascending shared-index
/// order, and exact zeros are not stored. Throws Error(shape) when
/// y.n_cols() != w.n_rows().
SparseMatrix spmm(const SparseMatrix& y, const SparseMatrix& w);

/// For every stored z: v = z + bias; dropped when v <= 0, set to ymax when
/// v > ymax. Positions not stored in z get no bias.
SparseMatrix apply_bias_relu_clamp(const SparseMatrix& z, double bias, double ymax);

/// Runs every layer of `model` over `y0`. The result is bit-identical for all
/// modes, worker counts, stage counts and tile sizes. Throws Error(shape)
/// when y0 does not have model.neurons() columns.
FeatureBatch infer(const NetworkModel& model, const FeatureBatch& y0, const InferenceConfig& cfg);

struct TimedInference {
  FeatureBatch output;
  CategorySet categories;
  /// Wall-clock seconds spent in inference plus categorization only.
  double seconds = 0.0;
};

TimedInference infer_timed(const NetworkModel& model, const FeatureBatch& y0,
                           const InferenceConfig& cfg);

}  // namespace sdnn
