#ifndef ARFEX_IMAGE_HPP
#define ARFEX_IMAGE_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "arfex/error.hpp"

namespace arfex {

template <typename Scalar>
using RowMajorMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using MatrixRXd = RowMajorMatrix<double>;
using LevelMatrix = RowMajorMatrix<std::uint8_t>;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster, row-major.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, Rgb fill = {});
  RasterImage(int width, int height, std::vector<Rgb> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }

  const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }
  Rgb& at(int x, int y) { return pixels_[index(x, y)]; }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  const std::vector<Rgb>& pixels() const noexcept { return pixels_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Luminance raster kept both as 8-bit levels and as level / 255 reals.
/// Matrices are indexed (row, col) = (y, x).
class GrayImage {
 public:
  GrayImage() = default;
  explicit GrayImage(LevelMatrix levels);

  int width() const noexcept { return static_cast<int>(levels_.cols()); }
  int height() const noexcept { return static_cast<int>(levels_.rows()); }

  const LevelMatrix& levels() const noexcept { return levels_; }
  const MatrixRXd& values() const noexcept { return values_; }

  std::uint8_t level(int x, int y) const { return levels_(y, x); }
  double value(int x, int y) const { return values_(y, x); }

 private:
  LevelMatrix levels_;
  MatrixRXd values_;
};

/// Inclusive pixel rectangle; x1/y1 are part of the rectangle.
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
};

/// Inclusive 2-D prefix sums: table(y, x) = sum of values(j, i) for i <= x, j <= y.
template <typename Scalar>
class BasicIntegralImage {
 public:
  using Table = RowMajorMatrix<Scalar>;

  BasicIntegralImage() = default;

  template <typename Derived>
  explicit BasicIntegralImage(const Eigen::MatrixBase<Derived>& values)
      : table_(values.rows(), values.cols()) {
    const Eigen::Index rows = values.rows();
    const Eigen::Index cols = values.cols();
    for (Eigen::Index r = 0; r < rows; ++r) {
      Scalar row_sum = Scalar(0);
      for (Eigen::Index c = 0; c < cols; ++c) {
        row_sum += static_cast<Scalar>(values(r, c));
        table_(r, c) = r > 0 ? row_sum + table_(r - 1, c) : row_sum;
      }
    }
  }

  int width() const noexcept { return static_cast<int>(table_.cols()); }
  int height() const noexcept { return static_cast<int>(table_.rows()); }
  const Table& table() const noexcept { return table_; }

  /// Sum over `rect` after clipping it to the image. Empty after clipping -> 0.
  Scalar sum(Rect rect) const noexcept {
    const int x0 = std::max(rect.x0, 0);
    const int y0 = std::max(rect.y0, 0);
    const int x1 = std::min(rect.x1, width() - 1);
    const int y1 = std::min(rect.y1, height() - 1);
    if (x0 > x1 || y0 > y1) return Scalar(0);

    const Scalar d = table_(y1, x1);
    const Scalar b = y0 > 0 ? table_(y0 - 1, x1) : Scalar(0);
    const Scalar c = x0 > 0 ? table_(y1, x0 - 1) : Scalar(0);
    const Scalar a = (x0 > 0 && y0 > 0) ? table_(y0 - 1, x0 - 1) : Scalar(0);
    return d - b - c + a;
  }

  /// Sum over the `rows` x `cols` block whose top-left pixel is (row, col).
  Scalar block_sum(int row, int col, int rows, int cols) const noexcept {
    return sum(Rect{col, row, col + cols - 1, row + rows - 1});
  }

 private:
  Table table_;
};

using IntegralImage = BasicIntegralImage<double>;

/// BT.601 luminance, rounded half up.
GrayImage to_grayscale(const RasterImage& img);

/// Expands a gray image back into an RGB raster (r = g = b).
RasterImage to_raster(const GrayImage& gray);

IntegralImage build_integral(const GrayImage& gray);

inline double box_sum(const IntegralImage& ii, Rect rect) noexcept {
  return ii.sum(rect);
}

}  // namespace arfex

#endif  // ARFEX_IMAGE_HPP
