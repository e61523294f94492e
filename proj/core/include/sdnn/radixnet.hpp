#pragma once

// Synthetic sparse network topologies: mixed-radix butterfly bases, uniform
// Kronecker expansion, and deepening by permutation-conjugated copies.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sdnn/network.hpp"
#include "sdnn/sparse_matrix.hpp"

namespace sdnn {

/// Per-stage fan-out factors of a butterfly base; one stage per radix.
struct RadixSpec {
  std::vector<std::uint32_t> radices;

  /// Product of the radices. Throws Error(parameter) for an empty list or a
  /// radix below 2, Error(capacity) when the product overflows a column index.
  std::size_t neurons() const;
};

/// Kronecker factors, one more than the number of base stages. Only uniform
/// factor lists are accepted.
struct KroneckerSpec {
  std::vector<std::uint32_t> factors;

  /// The common factor. Throws Error(parameter) when the list is empty,
  /// non-uniform, or contains 0.
  std::uint32_t factor() const;
};

struct GeneratorConfig {
  RadixSpec radix;
  KroneckerSpec kron;
  std::size_t target_layers = 0;
  double weight_value = 0.0625;
  std::uint64_t seed = 0;
  /// Per-layer bias; when unset it is looked up by neuron count.
  std::optional<double> bias;

  std::size_t base_depth() const noexcept { return radix.radices.size(); }
  std::size_t neurons() const;
  /// Throws Error(parameter) describing the first inconsistency.
  void validate() const;
};

/// Standard bias for the published network sizes
/// (1024, 4096, 16384, 65536 neurons), nullopt otherwise.
std::optional<double> table_bias(std::size_t neurons);

/// Generator parameters for a published network size: all-2 radices whose
/// product is N/16, uniform Kronecker factor 16, 32 connections per neuron.
/// Throws Error(parameter) for other sizes.
GeneratorConfig challenge_config(std::size_t neurons, std::size_t layers, std::uint64_t seed);

/// One binary N x N adjacency per radix. Stage s links neurons whose
/// mixed-radix expansions (least-significant digit first, digit s in base
/// r_s) agree in every digit except digit s.
std::vector<SparseMatrix> mixed_radix_butterfly(const RadixSpec& spec);

/// Replaces every stored 1 with a k x k block of ones.
std::vector<SparseMatrix> kronecker_expand(std::span<const SparseMatrix> base, std::uint32_t k);

/// Uniform random permutation of [0, n) for layer boundary `boundary`.
/// Boundary 0 is the identity; every other boundary is an independent draw
/// keyed only on (seed, boundary), so any layer can be built in isolation.
std::vector<ColIndex> boundary_permutation(std::size_t n, std::uint64_t seed,
                                           std::size_t boundary);

/// Relabels rows by `row_perm` and columns by `col_perm`:
/// out(row_perm[i], col_perm[j]) = a(i, j).
SparseMatrix permute(const SparseMatrix& a, std::span<const ColIndex> row_perm,
                     std::span<const ColIndex> col_perm);

/// Repeats `base` cyclically to `target_layers` layers; layer t (1-based) is
/// base[(t-1) mod B] with rows relabelled by permutation t-1 and columns by
/// permutation t. Throws Error(parameter) when the target is not a positive
/// multiple of the base length.
std::vector<SparseMatrix> deepen(std::span<const SparseMatrix> base, std::size_t target_layers,
                                 std::uint64_t seed);

/// Sets every stored weight to `weight_value` and every bias to `bias`, or to
/// table_bias(neurons) when `bias` is unset. Throws Error(parameter) for an
/// unknown size without explicit bias or for a non-binary topology.
NetworkModel assign_weights(std::span<const SparseMatrix> topology, double weight_value,
                            std::size_t neurons, std::optional<double> bias = std::nullopt);

std::uint64_t count_connections(const NetworkModel& model);

/// Builds layers of a configured network one at a time, so a model far larger
/// than memory can be streamed to disk. Thread-safe: layer() is const and
/// depends only on the configuration and the layer index.
class LayerGenerator {
 public:
  explicit LayerGenerator(GeneratorConfig cfg);

  std::size_t neurons() const noexcept { return neurons_; }
  std::size_t depth() const noexcept { return cfg_.target_layers; }
  double bias() const noexcept { return bias_; }
  const GeneratorConfig& config() const noexcept { return cfg_; }

  /// Binary adjacency of 0-based layer `index`.
  SparseMatrix topology(std::size_t index) const;
  LayerWeights layer(std::size_t index) const;

 private:
  GeneratorConfig cfg_;
  std::size_t neurons_;
  double bias_;
  std::vector<SparseMatrix> base_;
};

/// Calls fn(index, layer) once per layer from `workers` threads; fn must be
/// safe to call concurrently.
void for_each_layer(const LayerGenerator& gen, std::size_t workers,
                    const std::function<void(std::size_t, LayerWeights&&)>& fn);

/// Materializes the whole network, building layers on `workers` threads.
/// Output does not depend on the worker count.
NetworkModel generate_network(const GeneratorConfig& cfg, std::size_t workers = 1);

}  // namespace sdnn
