#include "sdnn/radixnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "parallel.hpp"
#include "sdnn/errors.hpp"

namespace sdnn {

namespace {

constexpr std::size_t kMaxNeurons = std::numeric_limits<ColIndex>::max();

std::size_t checked_mul(std::size_t a, std::size_t b, const char* what) {
  if (b != 0 && a > kMaxNeurons / b) {
    fail(ErrorKind::capacity, std::string(what) + " exceeds " + std::to_string(kMaxNeurons));
  }
  return a * b;
}

bool is_binary(const SparseMatrix& m) {
  auto v = m.values();
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 1.0; });
}

void require_square_binary(std::span<const SparseMatrix> mats, const char* op) {
  for (std::size_t s = 0; s < mats.size(); ++s) {
    const auto& m = mats[s];
    if (m.n_rows() != m.n_cols() || (s > 0 && m.n_rows() != mats[0].n_rows())) {
      fail(ErrorKind::parameter, std::string(op) + ": stage " + std::to_string(s + 1) +
                                     " is not square N x N");
    }
    if (!is_binary(m)) {
      fail(ErrorKind::parameter, std::string(op) + ": stage " + std::to_string(s + 1) +
                                     " is not a binary adjacency");
    }
  }
}

// splitmix64 finalizer; decorrelates (seed, boundary) pairs before seeding.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased draw in [0, bound). std::uniform_int_distribution is not specified
// bit-for-bit, so it would break cross-platform reproducibility.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace

std::size_t RadixSpec::neurons() const {
  if (radices.empty()) fail(ErrorKind::parameter, "radix set is empty");
  std::size_t n = 1;
  for (auto r : radices) {
    if (r < 2) fail(ErrorKind::parameter, "radix " + std::to_string(r) + " is below 2");
    n = checked_mul(n, r, "product of radices");
  }
  return n;
}

std::uint32_t KroneckerSpec::factor() const {
  if (factors.empty()) fail(ErrorKind::parameter, "Kronecker set is empty");
  const auto k = factors.front();
  if (k < 1) fail(ErrorKind::parameter, "Kronecker factor must be at least 1");
  if (std::any_of(factors.begin(), factors.end(), [k](auto f) { return f != k; })) {
    fail(ErrorKind::parameter, "Kronecker set must be uniform");
  }
  return k;
}

std::size_t GeneratorConfig::neurons() const {
  return checked_mul(radix.neurons(), kron.factor(), "neurons per layer");
}

void GeneratorConfig::validate() const {
  (void)neurons();
  if (kron.factors.size() != radix.radices.size() + 1) {
    fail(ErrorKind::parameter, "Kronecker set needs " + std::to_string(radix.radices.size() + 1) +
                                   " factors, got " + std::to_string(kron.factors.size()));
  }
  if (target_layers == 0 || target_layers % base_depth() != 0) {
    fail(ErrorKind::parameter, "layer count " + std::to_string(target_layers) +
                                   " is not a positive multiple of base depth " +
                                   std::to_string(base_depth()));
  }
  if (!(std::isfinite(weight_value) && weight_value > 0.0)) {
    fail(ErrorKind::parameter, "weight value must be a positive finite number");
  }
  if (bias && !std::isfinite(*bias)) fail(ErrorKind::parameter, "bias must be finite");
  if (!bias && !table_bias(neurons())) {
    fail(ErrorKind::parameter, "no standard bias for " + std::to_string(neurons()) +
                                   " neurons; supply one explicitly");
  }
}

std::optional<double> table_bias(std::size_t neurons) {
  switch (neurons) {
    case 1024: return -0.30;
    case 4096: return -0.35;
    case 16384: return -0.40;
    case 65536: return -0.45;
    default: return std::nullopt;
  }
}

GeneratorConfig challenge_config(std::size_t neurons, std::size_t layers, std::uint64_t seed) {
  std::size_t stages = 0;
  switch (neurons) {
    case 1024: stages = 6; break;
    case 4096: stages = 8; break;
    case 16384: stages = 10; break;
    case 65536: stages = 12; break;
    default:
      fail(ErrorKind::parameter, "no standard radix set for " + std::to_string(neurons) +
                                     " neurons (expected 1024, 4096, 16384 or 65536)");
  }
  GeneratorConfig cfg;
  cfg.radix.radices.assign(stages, 2);
  cfg.kron.factors.assign(stages + 1, 16);
  cfg.target_layers = layers;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

std::vector<SparseMatrix> mixed_radix_butterfly(const RadixSpec& spec) {
  const std::size_t n = spec.neurons();
  std::vector<SparseMatrix> stages;
  stages.reserve(spec.radices.size());

  std::size_t place = 1;  // weight of digit s
  for (const auto radix : spec.radices) {
    CsrParts p;
    p.n_rows = p.n_cols = n;
    p.row_offsets.resize(n + 1);
    p.col_indices.reserve(n * radix);
    for (std::size_t i = 0; i < n; ++i) {
      p.row_offsets[i] = p.col_indices.size();
      const std::size_t digit = (i / place) % radix;
      const std::size_t zeroed = i - digit * place;
      for (std::size_t d = 0; d < radix; ++d) {
        p.col_indices.push_back(static_cast<ColIndex>(zeroed + d * place));
      }
    }
    p.row_offsets[n] = p.col_indices.size();
    p.values.assign(p.col_indices.size(), 1.0);
    stages.push_back(SparseMatrix::adopt_trusted(std::move(p)));
    place *= radix;
  }
  return stages;
}

std::vector<SparseMatrix> kronecker_expand(std::span<const SparseMatrix> base, std::uint32_t k) {
  if (k < 1) fail(ErrorKind::parameter, "Kronecker factor must be at least 1");
  require_square_binary(base, "kronecker_expand");

  std::vector<SparseMatrix> out;
  out.reserve(base.size());
  for (const auto& a : base) {
    const std::size_t n = checked_mul(a.n_rows(), k, "expanded neurons");
    CsrParts p;
    p.n_rows = p.n_cols = n;
    p.row_offsets.resize(n + 1);
    p.col_indices.reserve(a.nnz() * k * k);
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
      for (std::size_t sub = 0; sub < k; ++sub) {
        p.row_offsets[i * k + sub] = p.col_indices.size();
        for (auto j : a.row_cols(i)) {
          for (std::size_t b = 0; b < k; ++b) {
            p.col_indices.push_back(static_cast<ColIndex>(std::size_t{j} * k + b));
          }
        }
      }
    }
    p.row_offsets[n] = p.col_indices.size();
    p.values.assign(p.col_indices.size(), 1.0);
    out.push_back(SparseMatrix::adopt_trusted(std::move(p)));
  }
  return out;
}

std::vector<ColIndex> boundary_permutation(std::size_t n, std::uint64_t seed,
                                           std::size_t boundary) {
  std::vector<ColIndex> perm(n);
  std::iota(perm.begin(), perm.end(), ColIndex{0});
  if (boundary == 0 || n < 2) return perm;

  std::mt19937_64 rng(mix64(seed ^ mix64(boundary)));
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(draw_below(rng, i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

SparseMatrix permute(const SparseMatrix& a, std::span<const ColIndex> row_perm,
                     std::span<const ColIndex> col_perm) {
  if (row_perm.size() != a.n_rows() || col_perm.size() != a.n_cols()) {
    fail(ErrorKind::shape, "permutation length does not match matrix shape");
  }
  std::vector<ColIndex> source_row(a.n_rows());
  for (std::size_t i = 0; i < row_perm.size(); ++i) source_row[row_perm[i]] = static_cast<ColIndex>(i);

  CsrParts p;
  p.n_rows = a.n_rows();
  p.n_cols = a.n_cols();
  p.row_offsets.resize(p.n_rows + 1);
  p.col_indices.reserve(a.nnz());
  p.values.reserve(a.nnz());

  std::vector<std::pair<ColIndex, double>> row;
  for (std::size_t r = 0; r < p.n_rows; ++r) {
    p.row_offsets[r] = p.col_indices.size();
    const auto src = source_row[r];
    auto cols = a.row_cols(src);
    auto vals = a.row_values(src);
    row.clear();
    for (std::size_t k = 0; k < cols.size(); ++k) row.emplace_back(col_perm[cols[k]], vals[k]);
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [c, v] : row) {
      p.col_indices.push_back(c);
      p.values.push_back(v);
    }
  }
  p.row_offsets[p.n_rows] = p.col_indices.size();
  return SparseMatrix::adopt_trusted(std::move(p));
}

std::vector<SparseMatrix> deepen(std::span<const SparseMatrix> base, std::size_t target_layers,
                                 std::uint64_t seed) {
  if (base.empty()) fail(ErrorKind::parameter, "deepen: base is empty");
  if (target_layers == 0 || target_layers % base.size() != 0) {
    fail(ErrorKind::parameter, "deepen: " + std::to_string(target_layers) +
                                   " is not a positive multiple of base depth " +
                                   std::to_string(base.size()));
  }
  const std::size_t n = base.front().n_rows();
  for (const auto& m : base) {
    if (m.n_rows() != n || m.n_cols() != n) fail(ErrorKind::parameter, "deepen: base stages differ in shape");
  }

  std::vector<SparseMatrix> out;
  out.reserve(target_layers);
  auto rows = boundary_permutation(n, seed, 0);
  for (std::size_t t = 1; t <= target_layers; ++t) {
    auto cols = boundary_permutation(n, seed, t);
    out.push_back(permute(base[(t - 1) % base.size()], rows, cols));
    rows = std::move(cols);
  }
  return out;
}

NetworkModel assign_weights(std::span<const SparseMatrix> topology, double weight_value,
                            std::size_t neurons, std::optional<double> bias) {
  if (!bias) bias = table_bias(neurons);
  if (!bias) {
    fail(ErrorKind::parameter, "no standard bias for " + std::to_string(neurons) +
                                   " neurons; supply one explicitly");
  }
  if (!std::isfinite(weight_value) || weight_value == 0.0) {
    fail(ErrorKind::parameter, "weight value must be finite and non-zero");
  }
  std::vector<LayerWeights> layers;
  layers.reserve(topology.size());
  for (std::size_t t = 0; t < topology.size(); ++t) {
    if (!is_binary(topology[t])) {
      fail(ErrorKind::parameter, "assign_weights: layer " + std::to_string(t + 1) + " is not binary");
    }
    CsrParts p{topology[t].n_rows(),
               topology[t].n_cols(),
               {topology[t].row_offsets().begin(), topology[t].row_offsets().end()},
               {topology[t].col_indices().begin(), topology[t].col_indices().end()},
               std::vector<double>(topology[t].nnz(), weight_value)};
    layers.push_back({SparseMatrix::adopt_trusted(std::move(p)), *bias});
  }
  return NetworkModel(neurons, std::move(layers));
}

std::uint64_t count_connections(const NetworkModel& model) { return model.connections(); }

LayerGenerator::LayerGenerator(GeneratorConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  neurons_ = cfg_.neurons();
  bias_ = cfg_.bias ? *cfg_.bias : *table_bias(neurons_);
  base_ = kronecker_expand(mixed_radix_butterfly(cfg_.radix), cfg_.kron.factor());
}

SparseMatrix LayerGenerator::topology(std::size_t index) const {
  if (index >= depth()) {
    fail(ErrorKind::bounds, "layer " + std::to_string(index) + " beyond depth " +
                                std::to_string(depth()));
  }
  const auto rows = boundary_permutation(neurons_, cfg_.seed, index);
  const auto cols = boundary_permutation(neurons_, cfg_.seed, index + 1);
  return permute(base_[index % base_.size()], rows, cols);
}

LayerWeights LayerGenerator::layer(std::size_t index) const {
  auto parts = topology(index).release();
  std::fill(parts.values.begin(), parts.values.end(), cfg_.weight_value);
  return {SparseMatrix::adopt_trusted(std::move(parts)), bias_};
}

void for_each_layer(const LayerGenerator& gen, std::size_t workers,
                    const std::function<void(std::size_t, LayerWeights&&)>& fn) {
  detail::parallel_items(gen.depth(), workers,
                         [&](std::size_t, std::size_t t) { fn(t, gen.layer(t)); });
}

NetworkModel generate_network(const GeneratorConfig& cfg, std::size_t workers) {
  LayerGenerator gen(cfg);
  std::vector<LayerWeights> layers(gen.depth());
  detail::parallel_items(gen.depth(), workers,
                         [&](std::size_t, std::size_t t) { layers[t] = gen.layer(t); });
  return NetworkModel(gen.neurons(), std::move(layers));
}

}  // namespace sdnn
