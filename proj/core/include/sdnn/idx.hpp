#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sdnn/sparse_matrix.hpp"

namespace sdnn {

/// Square grayscale images stored contiguously, row-major, one byte per pixel.
struct ImageSet {
  std::size_t count = 0;
  std::size_t side = 0;
  std::vector<std::uint8_t> pixels;

  std::span<const std::uint8_t> image(std::size_t i) const {
    return std::span<const std::uint8_t>(pixels).subspan(i * side * side, side * side);
  }
};

/// Reads an IDX3 unsigned-byte image file (magic 0x00000803, big-endian
/// header). Throws Error(format) on a bad magic or non-square images and
/// Error(length) on a truncated payload; nothing is returned on failure.
ImageSet read_idx(std::istream& in);

/// Like read_idx, from a path. Gzip-compressed files (the usual MNIST
/// distribution) are decompressed transparently.
ImageSet read_idx_file(const std::filesystem::path& path);

void write_idx(const ImageSet& images, std::ostream& out);

/// First `count` images (all of them when count exceeds the set).
ImageSet take_images(const ImageSet& images, std::size_t count);

/// Target edge lengths accepted by resize_threshold_flatten.
bool is_supported_side(std::size_t side) noexcept;

/// Bilinear resize (half-pixel centres, edge clamped) of intensities scaled to
/// [0,1], threshold at 0.5, and row-major flatten. Image i becomes row i of
/// the batch; every stored value is 1. Throws Error(parameter) unless
/// target_side is 32, 64, 128 or 256.
FeatureBatch resize_threshold_flatten(const ImageSet& images, std::size_t target_side);

}  // namespace sdnn
