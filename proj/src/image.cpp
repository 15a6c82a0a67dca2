#include "arfex/image.hpp"

#include <string>
#include <utility>

namespace arfex {
namespace {

void check_dimensions(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::InvalidImage,
                "image dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

RasterImage::RasterImage(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  check_dimensions(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 fill);
}

RasterImage::RasterImage(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dimensions(width, height);
  if (pixels_.size() !=
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorKind::InvalidImage, "pixel count does not match dimensions");
  }
}

GrayImage::GrayImage(LevelMatrix levels) : levels_(std::move(levels)) {
  check_dimensions(static_cast<int>(levels_.cols()), static_cast<int>(levels_.rows()));
  values_ = levels_.cast<double>() / 255.0;
}

GrayImage to_grayscale(const RasterImage& img) {
  LevelMatrix levels(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Rgb& p = img.at(x, y);
      // Weights scaled by 1000 so that rounding half up is exact.
      const int weighted = 299 * p.r + 587 * p.g + 114 * p.b;
      levels(y, x) = static_cast<std::uint8_t>(std::min((weighted + 500) / 1000, 255));
    }
  }
  return GrayImage(std::move(levels));
}

RasterImage to_raster(const GrayImage& gray) {
  RasterImage out(gray.width(), gray.height());
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) {
      const std::uint8_t v = gray.level(x, y);
      out.at(x, y) = Rgb{v, v, v};
    }
  }
  return out;
}

IntegralImage build_integral(const GrayImage& gray) {
  return IntegralImage(gray.values());
}

}  // namespace arfex
