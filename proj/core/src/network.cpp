#include "sdnn/network.hpp"

#include <string>

#include "sdnn/errors.hpp"

namespace sdnn {

NetworkModel::NetworkModel(std::size_t neurons, std::vector<LayerWeights> layers)
    : neurons_(neurons), layers_(std::move(layers)) {
  if (layers_.empty()) fail(ErrorKind::parameter, "a network needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& w = layers_[i].weights;
    if (w.n_rows() != neurons_ || w.n_cols() != neurons_) {
      fail(ErrorKind::shape, "layer " + std::to_string(i + 1) + " is " +
                                 std::to_string(w.n_rows()) + "x" + std::to_string(w.n_cols()) +
                                 ", expected " + std::to_string(neurons_) + "x" +
                                 std::to_string(neurons_));
    }
  }
}

std::uint64_t NetworkModel::connections() const noexcept {
  std::uint64_t total = 0;
  for (const auto& l : layers_) total += l.weights.nnz();
  return total;
}

}  // namespace sdnn
