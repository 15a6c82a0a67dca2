#ifndef ARFEX_FEATURES_HPP
#define ARFEX_FEATURES_HPP

#include <Eigen/Core>

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "arfex/image.hpp"

namespace arfex {

/// Parameters that vary between runs. Everything else about the detector and
/// descriptor is fixed below and echoed into JSON output.
struct ExtractionConfig {
  int octaves = 3;
  int intervals = 4;
  double threshold = 4e-4;
  bool upright = false;

  friend bool operator==(const ExtractionConfig&, const ExtractionConfig&) = default;
};

/// Throws InvalidArgument unless octaves in [1,4], intervals in [3,8],
/// threshold finite and >= 0.
void validate(const ExtractionConfig& config);

namespace params {
inline constexpr int kMinImageSize = 9;
inline constexpr double kDxyWeight = 0.9;
inline constexpr double kSigmaPerFilterSize = 1.2 / 9.0;

inline constexpr double kOrientationRadius = 6.0;      // in units of scale
inline constexpr double kOrientationHaarSize = 4.0;
inline constexpr double kOrientationSigma = 2.5;
inline constexpr double kOrientationWindow = std::numbers::pi / 3.0;
inline constexpr double kOrientationStep = std::numbers::pi / 32.0;

inline constexpr double kDescriptorWindow = 20.0;
inline constexpr int kDescriptorSubregions = 4;        // per side
inline constexpr int kDescriptorSamples = 5;           // per subregion side
inline constexpr double kDescriptorHaarSize = 2.0;
inline constexpr double kDescriptorSigma = 3.3;
inline constexpr int kDescriptorLength = 64;

/// Below this magnitude a Haar accumulation counts as zero (flat patch).
inline constexpr double kFlatTolerance = 1e-9;
}  // namespace params

/// Box-filter side length for a 1-based (octave, interval): 9, 15, 21, 27 for
/// the first octave, with the step doubling every octave.
int filter_size(int octave, int interval);

/// Sampling step of an octave: 1, 2, 4, 8.
int octave_stride(int octave);

struct ResponseMap {
  int octave = 1;
  int interval = 1;
  int filter_size = 9;
  double scale_sigma = 1.2;
  int stride = 1;
  int image_width = 0;
  int image_height = 0;
  /// Normalized det-of-Hessian; cell (r, c) samples pixel (c * stride, r * stride).
  /// Cells whose filter would reach past the image border hold 0.
  MatrixRXd responses;
  /// Sign of Dxx + Dyy with zero mapped to +1.
  RowMajorMatrix<std::int8_t> laplacian_signs;

  int rows() const noexcept { return static_cast<int>(responses.rows()); }
  int cols() const noexcept { return static_cast<int>(responses.cols()); }
};

struct HessianResponse {
  double dxx = 0.0;
  double dyy = 0.0;
  double dxy = 0.0;
  double determinant = 0.0;
  int laplacian_sign = 1;
};

/// Box-filter Hessian at pixel (x, y), normalized by filter_size^2.
HessianResponse hessian_at(const IntegralImage& ii, int x, int y, int filter_size);

struct InterestPoint {
  double x = 0.0;
  double y = 0.0;
  double scale = 0.0;
  double response = 0.0;
  int laplacian_sign = 1;
  double orientation = 0.0;

  friend bool operator==(const InterestPoint&, const InterestPoint&) = default;
};

using DescriptorVector = Eigen::Matrix<double, params::kDescriptorLength, 1>;

struct Descriptor {
  DescriptorVector components = DescriptorVector::Zero();
  int laplacian_sign = 1;

  friend bool operator==(const Descriptor& a, const Descriptor& b) {
    return a.laplacian_sign == b.laplacian_sign && a.components == b.components;
  }
};

struct Features {
  std::vector<InterestPoint> points;
  std::vector<Descriptor> descriptors;
};

/// One map per (octave, interval), octave-major. Throws ImageTooSmall when
/// either side is below 9 pixels.
std::vector<ResponseMap> build_response_maps(const IntegralImage& ii,
                                             const ExtractionConfig& config);

/// Scale-space maxima above `threshold`, refined by one quadratic step and
/// sorted by descending response, then (y, x, scale).
std::vector<InterestPoint> detect_interest_points(std::span<const ResponseMap> maps,
                                                  double threshold);

/// Haar wavelet responses of side `size` centred on pixel (x, y).
/// haar_x is right half minus left half; haar_y is bottom half minus top half.
double haar_x(const IntegralImage& ii, int x, int y, int size);
double haar_y(const IntegralImage& ii, int x, int y, int size);

InterestPoint assign_orientation(const IntegralImage& ii, InterestPoint ip);

Descriptor extract_descriptor(const IntegralImage& ii, const InterestPoint& ip,
                              bool upright);

Features extract_features(const GrayImage& gray, const ExtractionConfig& config);
Features extract_features(const RasterImage& img, const ExtractionConfig& config);

}  // namespace arfex

#endif  // ARFEX_FEATURES_HPP
