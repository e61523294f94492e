// Cross-check of the resize/threshold step against OpenCV's bilinear resize.

#include "doctest.h"

#include <filesystem>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "sdnn/idx.hpp"

using namespace sdnn;

TEST_CASE("bilinear threshold agrees with OpenCV INTER_LINEAR on real digits") {
  const auto path = std::filesystem::path(SDNN_TEST_DATA_DIR) / "t10k-images-idx3-ubyte.gz";
  const auto images = take_images(read_idx_file(path), 200);

  for (int side : {32, 64, 256}) {
    const auto batch = resize_threshold_flatten(images, static_cast<std::size_t>(side));
    std::size_t disagree = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < images.count; ++i) {
      const auto img = images.image(i);
      cv::Mat src(28, 28, CV_8U, const_cast<std::uint8_t*>(img.data()));
      cv::Mat norm, resized;
      src.convertTo(norm, CV_64F, 1.0 / 255.0);
      cv::resize(norm, resized, cv::Size(side, side), 0, 0, cv::INTER_LINEAR);
      for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
          const bool expected = resized.at<double>(r, c) >= 0.5;
          const bool got = batch.matrix().at(i, static_cast<std::size_t>(r * side + c)) == 1.0;
          disagree += expected != got;
          ++total;
        }
      }
    }
    INFO("side " << side << ": " << disagree << " of " << total << " pixels differ");
    // Only pixels sitting on the 0.5 threshold may round differently.
    CHECK(static_cast<double>(disagree) <= 1e-4 * static_cast<double>(total));
  }
}
