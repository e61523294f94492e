#include "sdnn/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "parallel.hpp"
#include "sdnn/challenge.hpp"
#include "sdnn/errors.hpp"

namespace sdnn {

const char* to_string(ExecutionMode mode) noexcept {
  switch (mode) {
    case ExecutionMode::serial: return "serial";
    case ExecutionMode::data_parallel: return "data_parallel";
    case ExecutionMode::pipeline: return "pipeline";
  }
  return "unknown";
}

std::optional<ExecutionMode> parse_mode(std::string_view text) noexcept {
  if (text == "serial") return ExecutionMode::serial;
  if (text == "data_parallel" || text == "data-parallel") return ExecutionMode::data_parallel;
  if (text == "pipeline") return ExecutionMode::pipeline;
  return std::nullopt;
}

void InferenceConfig::validate() const {
  if (!(std::isfinite(ymax) && ymax > 0.0)) fail(ErrorKind::parameter, "ymax must be positive and finite");
  if (workers < 1) fail(ErrorKind::parameter, "workers must be at least 1");
  if (batch_tile < 1) fail(ErrorKind::parameter, "batch tile must be at least 1 row");
}

namespace {

// A contiguous run of batch rows in CSR form.
struct RowBlock {
  std::vector<Offset> offsets{0};
  std::vector<ColIndex> cols;
  std::vector<double> vals;

  std::size_t rows() const noexcept { return offsets.size() - 1; }
  void clear() {
    offsets.assign(1, 0);
    cols.clear();
    vals.clear();
  }
};

RowBlock slice_rows(const SparseMatrix& m, std::size_t first, std::size_t last) {
  RowBlock b;
  const auto base = m.row_offsets()[first];
  b.offsets.resize(last - first + 1);
  for (std::size_t r = first; r <= last; ++r) b.offsets[r - first] = m.row_offsets()[r] - base;
  const auto begin = static_cast<std::ptrdiff_t>(base);
  const auto end = static_cast<std::ptrdiff_t>(m.row_offsets()[last]);
  b.cols.assign(m.col_indices().begin() + begin, m.col_indices().begin() + end);
  b.vals.assign(m.values().begin() + begin, m.values().begin() + end);
  return b;
}

SparseMatrix stitch(std::vector<RowBlock>& blocks, std::size_t n_cols) {
  CsrParts p;
  p.n_cols = n_cols;
  std::size_t nnz = 0;
  for (const auto& b : blocks) {
    p.n_rows += b.rows();
    nnz += b.cols.size();
  }
  p.row_offsets.reserve(p.n_rows + 1);
  p.row_offsets.push_back(0);
  p.col_indices.reserve(nnz);
  p.values.reserve(nnz);
  for (auto& b : blocks) {
    const Offset base = p.col_indices.size();
    for (std::size_t r = 1; r < b.offsets.size(); ++r) p.row_offsets.push_back(base + b.offsets[r]);
    p.col_indices.insert(p.col_indices.end(), b.cols.begin(), b.cols.end());
    p.values.insert(p.values.end(), b.vals.begin(), b.vals.end());
    b = RowBlock{};
  }
  return SparseMatrix::adopt_trusted(std::move(p));
}

// Dense scatter accumulator sized to the output width, reused across rows.
class Accumulator {
 public:
  explicit Accumulator(std::size_t width) : sum_(width, 0.0), seen_(width, 0) {}

  // Gustavson row product: walks the input row in ascending column order, so
  // every output position receives its products in ascending shared index.
  void multiply_row(std::span<const ColIndex> y_cols, std::span<const double> y_vals,
                    const SparseMatrix& w) {
    touched_.clear();
    for (std::size_t e = 0; e < y_cols.size(); ++e) {
      const double y = y_vals[e];
      const auto w_cols = w.row_cols(y_cols[e]);
      const auto w_vals = w.row_values(y_cols[e]);
      for (std::size_t k = 0; k < w_cols.size(); ++k) {
        const auto j = w_cols[k];
        const double product = y * w_vals[k];
        if (seen_[j]) {
          sum_[j] += product;
        } else {
          seen_[j] = 1;
          sum_[j] = product;
          touched_.push_back(j);
        }
      }
    }
    // Dense rows are cheaper to collect by scanning the flags than by sorting.
    if (touched_.size() * 8 > sum_.size()) {
      touched_.clear();
      for (std::size_t j = 0; j < seen_.size(); ++j) {
        if (seen_[j]) touched_.push_back(static_cast<ColIndex>(j));
      }
    } else {
      std::sort(touched_.begin(), touched_.end());
    }
  }

  // Visits (column, sum) for the current row in ascending column order and
  // resets the accumulator.
  template <class Fn>
  void drain(Fn&& fn) {
    for (const auto j : touched_) {
      fn(j, sum_[j]);
      seen_[j] = 0;
    }
    touched_.clear();
  }

 private:
  std::vector<double> sum_;
  std::vector<std::uint8_t> seen_;
  std::vector<ColIndex> touched_;
};

// One fused layer: Z = Y W, entry-masked bias, ReLU, clamp.
void forward_layer(const RowBlock& in, const LayerWeights& layer, double ymax, Accumulator& acc,
                   RowBlock& out) {
  out.clear();
  out.offsets.reserve(in.offsets.size());
  const double bias = layer.bias;
  for (std::size_t r = 0; r < in.rows(); ++r) {
    const auto first = in.offsets[r];
    const auto count = in.offsets[r + 1] - first;
    acc.multiply_row(std::span(in.cols).subspan(first, count),
                     std::span(in.vals).subspan(first, count), layer.weights);
    acc.drain([&](ColIndex j, double z) {
      if (z == 0.0) return;
      double v = z + bias;
      if (v <= 0.0) return;
      if (v > ymax) v = ymax;
      out.cols.push_back(j);
      out.vals.push_back(v);
    });
    out.offsets.push_back(out.cols.size());
  }
}

void run_layers(RowBlock& block, const NetworkModel& model, std::size_t first_layer,
                std::size_t last_layer, double ymax, Accumulator& acc) {
  RowBlock next;
  for (std::size_t l = first_layer; l < last_layer; ++l) {
    forward_layer(block, model.layer(l), ymax, acc, next);
    std::swap(block, next);
  }
}

std::size_t tile_count(std::size_t rows, std::size_t tile) { return (rows + tile - 1) / tile; }

SparseMatrix infer_serial(const NetworkModel& model, const SparseMatrix& y0, double ymax) {
  std::vector<RowBlock> blocks;
  blocks.push_back(slice_rows(y0, 0, y0.n_rows()));
  Accumulator acc(model.neurons());
  run_layers(blocks.front(), model, 0, model.depth(), ymax, acc);
  return stitch(blocks, model.neurons());
}

// Contiguous row tiles; each worker carries its tile through every layer
// against the shared read-only weights.
SparseMatrix infer_data_parallel(const NetworkModel& model, const SparseMatrix& y0,
                                 const InferenceConfig& cfg) {
  const std::size_t tiles = tile_count(y0.n_rows(), cfg.batch_tile);
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, tiles));
  std::vector<RowBlock> blocks(tiles);
  std::vector<Accumulator> accs;
  accs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) accs.emplace_back(model.neurons());

  detail::parallel_items(tiles, workers, [&](std::size_t worker, std::size_t t) {
    const std::size_t first = t * cfg.batch_tile;
    const std::size_t last = std::min(first + cfg.batch_tile, y0.n_rows());
    blocks[t] = slice_rows(y0, first, last);
    run_layers(blocks[t], model, 0, model.depth(), cfg.ymax, accs[worker]);
  });
  return stitch(blocks, model.neurons());
}

// Each stage thread owns a contiguous layer range and processes tiles in
// order, picking a tile up once the previous stage has released it.
SparseMatrix infer_pipeline(const NetworkModel& model, const SparseMatrix& y0,
                            const InferenceConfig& cfg) {
  const std::size_t depth = model.depth();
  const std::size_t requested = cfg.pipeline_stages ? cfg.pipeline_stages : cfg.workers;
  const std::size_t stages = std::max<std::size_t>(1, std::min(requested, depth));
  const std::size_t tiles = tile_count(y0.n_rows(), cfg.batch_tile);

  std::vector<std::size_t> layer_start(stages + 1);
  for (std::size_t s = 0; s <= stages; ++s) layer_start[s] = s * depth / stages;

  std::vector<RowBlock> blocks(tiles);
  for (std::size_t t = 0; t < tiles; ++t) {
    const std::size_t first = t * cfg.batch_tile;
    blocks[t] = slice_rows(y0, first, std::min(first + cfg.batch_tile, y0.n_rows()));
  }

  std::vector<std::size_t> stages_done(tiles, 0);
  std::mutex mutex;
  std::condition_variable ready;
  std::exception_ptr error;
  bool aborted = false;

  auto stage_body = [&](std::size_t s) {
    try {
      Accumulator acc(model.neurons());
      for (std::size_t t = 0; t < tiles; ++t) {
        {
          std::unique_lock lock(mutex);
          ready.wait(lock, [&] { return aborted || stages_done[t] == s; });
          if (aborted) return;
        }
        run_layers(blocks[t], model, layer_start[s], layer_start[s + 1], cfg.ymax, acc);
        {
          std::lock_guard lock(mutex);
          stages_done[t] = s + 1;
        }
        ready.notify_all();
      }
    } catch (...) {
      {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        aborted = true;
      }
      ready.notify_all();
    }
  };

  {
    std::vector<std::jthread> threads;
    threads.reserve(stages);
    for (std::size_t s = 0; s < stages; ++s) threads.emplace_back(stage_body, s);
  }
  if (error) std::rethrow_exception(error);
  return stitch(blocks, model.neurons());
}

}  // namespace

SparseMatrix spmm(const SparseMatrix& y, const SparseMatrix& w) {
  if (y.n_cols() != w.n_rows()) {
    fail(ErrorKind::shape, "spmm: " + std::to_string(y.n_rows()) + "x" +
                               std::to_string(y.n_cols()) + " times " +
                               std::to_string(w.n_rows()) + "x" + std::to_string(w.n_cols()));
  }
  CsrParts p;
  p.n_rows = y.n_rows();
  p.n_cols = w.n_cols();
  p.row_offsets.reserve(y.n_rows() + 1);
  p.row_offsets.push_back(0);
  Accumulator acc(w.n_cols());
  for (std::size_t r = 0; r < y.n_rows(); ++r) {
    acc.multiply_row(y.row_cols(r), y.row_values(r), w);
    acc.drain([&](ColIndex j, double z) {
      if (z == 0.0) return;
      p.col_indices.push_back(j);
      p.values.push_back(z);
    });
    p.row_offsets.push_back(p.col_indices.size());
  }
  return SparseMatrix::adopt_trusted(std::move(p));
}

SparseMatrix apply_bias_relu_clamp(const SparseMatrix& z, double bias, double ymax) {
  CsrParts p;
  p.n_rows = z.n_rows();
  p.n_cols = z.n_cols();
  p.row_offsets.reserve(z.n_rows() + 1);
  p.row_offsets.push_back(0);
  for (std::size_t r = 0; r < z.n_rows(); ++r) {
    const auto cols = z.row_cols(r);
    const auto vals = z.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      double v = vals[k] + bias;
      if (v <= 0.0) continue;
      if (v > ymax) v = ymax;
      p.col_indices.push_back(cols[k]);
      p.values.push_back(v);
    }
    p.row_offsets.push_back(p.col_indices.size());
  }
  return SparseMatrix::adopt_trusted(std::move(p));
}

FeatureBatch infer(const NetworkModel& model, const FeatureBatch& y0, const InferenceConfig& cfg) {
  cfg.validate();
  if (y0.neurons() != model.neurons()) {
    fail(ErrorKind::shape, "input has " + std::to_string(y0.neurons()) +
                               " columns but the network has " +
                               std::to_string(model.neurons()) + " neurons");
  }
  const auto& y = y0.matrix();
  if (y.n_rows() == 0) return FeatureBatch(SparseMatrix(0, model.neurons()));
  switch (cfg.mode) {
    case ExecutionMode::serial: return FeatureBatch(infer_serial(model, y, cfg.ymax));
    case ExecutionMode::data_parallel: return FeatureBatch(infer_data_parallel(model, y, cfg));
    case ExecutionMode::pipeline: return FeatureBatch(infer_pipeline(model, y, cfg));
  }
  fail(ErrorKind::parameter, "unknown execution mode");
}

TimedInference infer_timed(const NetworkModel& model, const FeatureBatch& y0,
                           const InferenceConfig& cfg) {
  using clock = std::chrono::steady_clock;
  TimedInference result;
  const auto start = clock::now();
  result.output = infer(model, y0, cfg);
  result.categories = categorize(result.output);
  const auto stop = clock::now();
  result.seconds = std::chrono::duration<double>(stop - start).count();
  return result;
}

}  // namespace sdnn
