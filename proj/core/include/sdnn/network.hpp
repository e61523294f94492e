#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sdnn/sparse_matrix.hpp"

namespace sdnn {

/// One layer: an N x N weight matrix and the scalar bias added to every
/// non-zero pre-activation.
struct LayerWeights {
  SparseMatrix weights;
  double bias = 0.0;

  friend bool operator==(const LayerWeights&, const LayerWeights&) = default;
};

/// A feed-forward sparse network with N neurons in every layer.
class NetworkModel {
 public:
  /// Throws Error(parameter) when `layers` is empty and Error(shape) when any
  /// layer is not neurons x neurons.
  NetworkModel(std::size_t neurons, std::vector<LayerWeights> layers);

  std::size_t neurons() const noexcept { return neurons_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  const std::vector<LayerWeights>& layers() const noexcept { return layers_; }
  const LayerWeights& layer(std::size_t i) const { return layers_.at(i); }

  /// Sum of stored weights over all layers.
  std::uint64_t connections() const noexcept;

  friend bool operator==(const NetworkModel&, const NetworkModel&) = default;

 private:
  std::size_t neurons_;
  std::vector<LayerWeights> layers_;
};

}  // namespace sdnn
