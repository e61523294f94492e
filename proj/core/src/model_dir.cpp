#include "sdnn/model_dir.hpp"

#include <map>
#include <regex>

#include "parallel.hpp"
#include "sdnn/errors.hpp"

namespace sdnn {

std::string layer_file_name(std::size_t neurons, std::size_t layer, MatrixFormat format) {
  return "n" + std::to_string(neurons) + "-l" + std::to_string(layer) +
         (format == MatrixFormat::binary ? ".bin" : ".tsv");
}

ModelListing list_model(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    fail(ErrorKind::io, dir.string() + ": not a model directory");
  }

  static const std::regex pattern(R"(n([0-9]+)-l([0-9]+)\.(tsv|bin))");
  std::map<std::size_t, std::filesystem::path> found;
  std::size_t neurons = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) continue;
    const auto n = std::stoull(m[1].str());
    const auto layer = std::stoull(m[2].str());
    if (layer == 0) fail(ErrorKind::format, dir.string() + ": layer numbers start at 1");
    if (neurons != 0 && n != neurons) {
      fail(ErrorKind::shape, dir.string() + ": layer files for both " + std::to_string(neurons) +
                                 " and " + std::to_string(n) + " neurons");
    }
    neurons = n;
    auto [it, inserted] = found.emplace(layer, entry.path());
    if (!inserted && m[3] == "bin") it->second = entry.path();
  }
  if (found.empty()) fail(ErrorKind::format, dir.string() + ": no n<N>-l<layer> files");

  ModelListing listing;
  listing.neurons = neurons;
  for (auto& [layer, path] : found) {
    if (layer != listing.layers.size() + 1) {
      fail(ErrorKind::format,
           dir.string() + ": layer " + std::to_string(listing.layers.size() + 1) + " is missing");
    }
    listing.layers.push_back({layer, std::move(path)});
  }
  return listing;
}

NetworkModel load_model(const ModelListing& listing, std::size_t layers, double bias,
                        std::size_t workers) {
  if (layers == 0) layers = listing.layers.size();
  if (layers > listing.layers.size()) {
    fail(ErrorKind::shape, "requested " + std::to_string(layers) + " layers, model has " +
                               std::to_string(listing.layers.size()));
  }
  const std::size_t n = listing.neurons;
  std::vector<LayerWeights> weights(layers);
  detail::parallel_items(layers, workers, [&](std::size_t, std::size_t i) {
    weights[i] = {load_matrix(listing.layers[i].path, n, n), bias};
  });
  return NetworkModel(n, std::move(weights));
}

}  // namespace sdnn
