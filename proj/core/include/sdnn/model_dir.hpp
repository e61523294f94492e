#pragma once
// Model directories: one file per layer named n<N>-l<layer>.tsv or .bin.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "sdnn/formats.hpp"
#include "sdnn/network.hpp"

namespace sdnn {

struct LayerFile {
  std::size_t layer = 0;  // 1-based
  std::filesystem::path path;
};

struct ModelListing {
  std::size_t neurons = 0;
  /// layers[i].layer == i + 1.
  std::vector<LayerFile> layers;
};

std::string layer_file_name(std::size_t neurons, std::size_t layer, MatrixFormat format);

/// Finds the layer files in `dir`. When a layer exists in both formats the
/// binary file is used. Throws Error(io) if `dir` is not a directory,
/// Error(format) if there are no layer files or the numbering has a gap, and
/// Error(shape) if files disagree on the neuron count.
ModelListing list_model(const std::filesystem::path& dir);

/// Loads the first `layers` layers (all when 0) with a uniform bias.
/// Throws Error(shape) when fewer layers exist.
NetworkModel load_model(const ModelListing& listing, std::size_t layers, double bias,
                        std::size_t workers = 1);

}  // namespace sdnn
