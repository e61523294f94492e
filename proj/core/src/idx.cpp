#include "sdnn/idx.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>

#include "sdnn/errors.hpp"

namespace sdnn {

namespace {

constexpr std::uint32_t kIdx3Magic = 0x00000803;

std::uint32_t load_be32(const unsigned char* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

void store_be32(std::uint32_t v, char* p) {
  p[0] = static_cast<char>(v >> 24);
  p[1] = static_cast<char>(v >> 16);
  p[2] = static_cast<char>(v >> 8);
  p[3] = static_cast<char>(v);
}

struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

// Source taps for each destination coordinate; same convention as the common
// image libraries' "linear" mode.
std::vector<Tap> linear_taps(std::size_t src, std::size_t dst) {
  std::vector<Tap> taps(dst);
  const double scale = static_cast<double>(src) / static_cast<double>(dst);
  for (std::size_t d = 0; d < dst; ++d) {
    const double s = (static_cast<double>(d) + 0.5) * scale - 0.5;
    auto lo = static_cast<std::ptrdiff_t>(std::floor(s));
    double frac = s - static_cast<double>(lo);
    if (lo < 0) {
      lo = 0;
      frac = 0.0;
    }
    if (lo >= static_cast<std::ptrdiff_t>(src) - 1) {
      lo = static_cast<std::ptrdiff_t>(src) - 1;
      frac = 0.0;
    }
    const auto ulo = static_cast<std::size_t>(lo);
    taps[d] = {ulo, std::min(ulo + 1, src - 1), frac};
  }
  return taps;
}

}  // namespace

ImageSet read_idx(std::istream& in) {
  std::array<unsigned char, 16> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() < 4) fail(ErrorKind::length, "IDX header truncated");
  const auto magic = load_be32(header.data());
  if (magic != kIdx3Magic) {
    std::ostringstream msg;
    msg << "not an IDX3 image file (magic 0x" << std::hex << magic << ", expected 0x803)";
    fail(ErrorKind::format, msg.str());
  }
  if (in.gcount() < static_cast<std::streamsize>(header.size())) {
    fail(ErrorKind::length, "IDX header truncated");
  }
  const std::size_t count = load_be32(header.data() + 4);
  const std::size_t rows = load_be32(header.data() + 8);
  const std::size_t cols = load_be32(header.data() + 12);
  if (rows != cols || rows == 0) {
    fail(ErrorKind::format, "IDX images are " + std::to_string(rows) + "x" + std::to_string(cols) +
                                ", expected non-empty square images");
  }

  ImageSet set;
  set.count = count;
  set.side = rows;
  const std::size_t bytes = count * rows * cols;
  set.pixels.resize(bytes);
  in.read(reinterpret_cast<char*>(set.pixels.data()), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) {
    fail(ErrorKind::length, "IDX payload truncated: " + std::to_string(in.gcount()) + " of " +
                                std::to_string(bytes) + " bytes");
  }
  return set;
}

ImageSet read_idx_file(const std::filesystem::path& path) {
  std::unique_ptr<gzFile_s, decltype(&gzclose)> gz(gzopen(path.c_str(), "rb"), &gzclose);
  if (!gz) fail(ErrorKind::io, "cannot open " + path.string());

  std::string data;
  std::array<char, 1 << 16> chunk{};
  for (;;) {
    const int got = gzread(gz.get(), chunk.data(), static_cast<unsigned>(chunk.size()));
    if (got < 0) {
      int code = 0;
      fail(ErrorKind::io, path.string() + ": " + gzerror(gz.get(), &code));
    }
    if (got == 0) break;
    data.append(chunk.data(), static_cast<std::size_t>(got));
  }
  std::istringstream in(std::move(data));
  try {
    return read_idx(in);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

void write_idx(const ImageSet& images, std::ostream& out) {
  std::array<char, 16> header{};
  store_be32(kIdx3Magic, header.data());
  store_be32(static_cast<std::uint32_t>(images.count), header.data() + 4);
  store_be32(static_cast<std::uint32_t>(images.side), header.data() + 8);
  store_be32(static_cast<std::uint32_t>(images.side), header.data() + 12);
  out.write(header.data(), header.size());
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
  if (!out) fail(ErrorKind::io, "failed writing IDX stream");
}

ImageSet take_images(const ImageSet& images, std::size_t count) {
  ImageSet out;
  out.count = std::min(count, images.count);
  out.side = images.side;
  const auto bytes = out.count * out.side * out.side;
  out.pixels.assign(images.pixels.begin(), images.pixels.begin() + static_cast<std::ptrdiff_t>(bytes));
  return out;
}

bool is_supported_side(std::size_t side) noexcept {
  return side == 32 || side == 64 || side == 128 || side == 256;
}

FeatureBatch resize_threshold_flatten(const ImageSet& images, std::size_t target_side) {
  if (!is_supported_side(target_side)) {
    fail(ErrorKind::parameter, "unsupported target side " + std::to_string(target_side) +
                                   " (expected 32, 64, 128 or 256)");
  }
  const std::size_t src = images.side;
  const auto taps = linear_taps(src, target_side);

  CsrParts p;
  p.n_rows = images.count;
  p.n_cols = target_side * target_side;
  p.row_offsets.resize(images.count + 1);

  std::vector<double> norm(src * src);
  for (std::size_t i = 0; i < images.count; ++i) {
    p.row_offsets[i] = p.col_indices.size();
    const auto img = images.image(i);
    std::transform(img.begin(), img.end(), norm.begin(),
                   [](std::uint8_t v) { return static_cast<double>(v) / 255.0; });
    for (std::size_t y = 0; y < target_side; ++y) {
      const auto& ty = taps[y];
      const double* top = norm.data() + ty.lo * src;
      const double* bottom = norm.data() + ty.hi * src;
      for (std::size_t x = 0; x < target_side; ++x) {
        const auto& tx = taps[x];
        const double upper = top[tx.lo] * (1.0 - tx.frac) + top[tx.hi] * tx.frac;
        const double lower = bottom[tx.lo] * (1.0 - tx.frac) + bottom[tx.hi] * tx.frac;
        const double v = upper * (1.0 - ty.frac) + lower * ty.frac;
        if (v >= 0.5) p.col_indices.push_back(static_cast<ColIndex>(y * target_side + x));
      }
    }
  }
  p.row_offsets[images.count] = p.col_indices.size();
  p.values.assign(p.col_indices.size(), 1.0);
  return FeatureBatch(SparseMatrix::adopt_trusted(std::move(p)));
}

}  // namespace sdnn
