#include "arfex/features.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

namespace arfex {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

int rounded(double v) { return static_cast<int>(std::floor(v + 0.5)); }

void check_size(int width, int height) {
  if (width < params::kMinImageSize || height < params::kMinImageSize) {
    throw Error(ErrorKind::ImageTooSmall,
                "image is " + std::to_string(width) + "x" + std::to_string(height) +
                    ", feature extraction needs at least 9x9");
  }
}

bool descending_response(const InterestPoint& a, const InterestPoint& b) {
  if (a.response != b.response) return a.response > b.response;
  return std::tie(a.y, a.x, a.scale) < std::tie(b.y, b.x, b.scale);
}

// Three adjacent intervals of one octave, all on the same grid.
struct LayerTriple {
  const ResponseMap& below;
  const ResponseMap& middle;
  const ResponseMap& above;

  bool is_strict_maximum(int r, int c) const {
    const double candidate = middle.responses(r, c);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (below.responses(r + dr, c + dc) >= candidate) return false;
        if (above.responses(r + dr, c + dc) >= candidate) return false;
        if ((dr != 0 || dc != 0) && middle.responses(r + dr, c + dc) >= candidate) {
          return false;
        }
      }
    }
    return true;
  }

  // Offset (dx, dy, ds) of the quadratic extremum through the 3x3x3 samples.
  bool interpolate(int r, int c, Eigen::Vector3d& offset) const {
    const auto& b = below.responses;
    const auto& m = middle.responses;
    const auto& t = above.responses;
    const double v = m(r, c);

    const Eigen::Vector3d gradient((m(r, c + 1) - m(r, c - 1)) / 2.0,
                                   (m(r + 1, c) - m(r - 1, c)) / 2.0,
                                   (t(r, c) - b(r, c)) / 2.0);

    const double dxx = m(r, c + 1) + m(r, c - 1) - 2.0 * v;
    const double dyy = m(r + 1, c) + m(r - 1, c) - 2.0 * v;
    const double dss = t(r, c) + b(r, c) - 2.0 * v;
    const double dxy = (m(r + 1, c + 1) - m(r + 1, c - 1) - m(r - 1, c + 1) + m(r - 1, c - 1)) / 4.0;
    const double dxs = (t(r, c + 1) - t(r, c - 1) - b(r, c + 1) + b(r, c - 1)) / 4.0;
    const double dys = (t(r + 1, c) - t(r - 1, c) - b(r + 1, c) + b(r - 1, c)) / 4.0;

    Eigen::Matrix3d hessian;
    hessian << dxx, dxy, dxs,
               dxy, dyy, dys,
               dxs, dys, dss;
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(hessian);
    if (!lu.isInvertible()) return false;
    offset = -lu.solve(gradient);
    return offset.allFinite();
  }
};

void detect_in_triple(const LayerTriple& layers, double threshold,
                      std::vector<InterestPoint>& out) {
  const ResponseMap& mid = layers.middle;
  const ResponseMap& top = layers.above;
  const int border = (top.filter_size + 1) / (2 * top.stride);
  const int filter_step = mid.filter_size - layers.below.filter_size;

  for (int r = border + 1; r < mid.rows() - border; ++r) {
    for (int c = border + 1; c < mid.cols() - border; ++c) {
      const double response = mid.responses(r, c);
      if (!(response > threshold)) continue;
      if (!layers.is_strict_maximum(r, c)) continue;

      Eigen::Vector3d offset;
      if (!layers.interpolate(r, c, offset)) continue;
      if ((offset.array().abs() > 0.5).any()) continue;

      InterestPoint ip;
      ip.x = (c + offset.x()) * mid.stride;
      ip.y = (r + offset.y()) * mid.stride;
      ip.scale = params::kSigmaPerFilterSize * (mid.filter_size + offset.z() * filter_step);
      ip.response = response;
      ip.laplacian_sign = mid.laplacian_signs(r, c);
      if (ip.x < 0.0 || ip.y < 0.0 || ip.x >= mid.image_width ||
          ip.y >= mid.image_height || !(ip.scale > 0.0)) {
        continue;
      }
      out.push_back(ip);
    }
  }
}

}  // namespace

void validate(const ExtractionConfig& config) {
  if (config.octaves < 1 || config.octaves > 4) {
    throw Error(ErrorKind::InvalidArgument, "octaves must be in [1,4]");
  }
  if (config.intervals < 3 || config.intervals > 8) {
    throw Error(ErrorKind::InvalidArgument, "intervals must be in [3,8]");
  }
  if (!std::isfinite(config.threshold) || config.threshold < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "threshold must be finite and non-negative");
  }
}

int filter_size(int octave, int interval) {
  return 3 * ((1 << octave) * interval + 1);
}

int octave_stride(int octave) { return 1 << (octave - 1); }

HessianResponse hessian_at(const IntegralImage& ii, int x, int y, int size) {
  const int lobe = size / 3;
  const int half = (size - 1) / 2;
  const double inverse_area = 1.0 / (static_cast<double>(size) * size);

  HessianResponse h;
  h.dxx = ii.block_sum(y - lobe + 1, x - half, 2 * lobe - 1, size) -
          3.0 * ii.block_sum(y - lobe + 1, x - lobe / 2, 2 * lobe - 1, lobe);
  h.dyy = ii.block_sum(y - half, x - lobe + 1, size, 2 * lobe - 1) -
          3.0 * ii.block_sum(y - lobe / 2, x - lobe + 1, lobe, 2 * lobe - 1);
  h.dxy = ii.block_sum(y - lobe, x + 1, lobe, lobe) +
          ii.block_sum(y + 1, x - lobe, lobe, lobe) -
          ii.block_sum(y - lobe, x - lobe, lobe, lobe) -
          ii.block_sum(y + 1, x + 1, lobe, lobe);

  h.dxx *= inverse_area;
  h.dyy *= inverse_area;
  h.dxy *= inverse_area;
  const double weighted_dxy = params::kDxyWeight * h.dxy;
  h.determinant = h.dxx * h.dyy - weighted_dxy * weighted_dxy;
  h.laplacian_sign = (h.dxx + h.dyy) >= 0.0 ? 1 : -1;
  return h;
}

std::vector<ResponseMap> build_response_maps(const IntegralImage& ii,
                                             const ExtractionConfig& config) {
  validate(config);
  check_size(ii.width(), ii.height());

  std::vector<ResponseMap> maps;
  maps.reserve(static_cast<std::size_t>(config.octaves * config.intervals));
  for (int octave = 1; octave <= config.octaves; ++octave) {
    const int stride = octave_stride(octave);
    const int rows = (ii.height() + stride - 1) / stride;
    const int cols = (ii.width() + stride - 1) / stride;
    for (int interval = 1; interval <= config.intervals; ++interval) {
      ResponseMap map;
      map.octave = octave;
      map.interval = interval;
      map.filter_size = filter_size(octave, interval);
      map.scale_sigma = params::kSigmaPerFilterSize * map.filter_size;
      map.stride = stride;
      map.image_width = ii.width();
      map.image_height = ii.height();
      map.responses.resize(rows, cols);
      map.laplacian_signs.resize(rows, cols);
      // Cells whose filter does not fit inside the image carry no response.
      map.responses.setZero();
      map.laplacian_signs.setOnes();
      const int half = (map.filter_size - 1) / 2;
      for (int r = 0; r < rows; ++r) {
        const int y = r * stride;
        if (y < half || y + half >= ii.height()) continue;
        for (int c = 0; c < cols; ++c) {
          const int x = c * stride;
          if (x < half || x + half >= ii.width()) continue;
          const HessianResponse h = hessian_at(ii, x, y, map.filter_size);
          map.responses(r, c) = h.determinant;
          map.laplacian_signs(r, c) = static_cast<std::int8_t>(h.laplacian_sign);
        }
      }
      maps.push_back(std::move(map));
    }
  }
  return maps;
}

std::vector<InterestPoint> detect_interest_points(std::span<const ResponseMap> maps,
                                                  double threshold) {
  std::map<int, std::vector<const ResponseMap*>> by_octave;
  for (const ResponseMap& map : maps) by_octave[map.octave].push_back(&map);

  std::vector<InterestPoint> points;
  for (auto& [octave, layers] : by_octave) {
    std::sort(layers.begin(), layers.end(),
              [](const ResponseMap* a, const ResponseMap* b) { return a->interval < b->interval; });
    for (std::size_t i = 1; i + 1 < layers.size(); ++i) {
      const LayerTriple triple{*layers[i - 1], *layers[i], *layers[i + 1]};
      if (triple.below.responses.rows() != triple.middle.responses.rows() ||
          triple.above.responses.rows() != triple.middle.responses.rows() ||
          triple.below.responses.cols() != triple.middle.responses.cols() ||
          triple.above.responses.cols() != triple.middle.responses.cols()) {
        throw Error(ErrorKind::InvalidArgument, "response maps of one octave differ in size");
      }
      detect_in_triple(triple, threshold, points);
    }
  }
  std::sort(points.begin(), points.end(), descending_response);
  return points;
}

double haar_x(const IntegralImage& ii, int x, int y, int size) {
  const int half = size / 2;
  return ii.block_sum(y - half, x, size, half) - ii.block_sum(y - half, x - half, size, half);
}

double haar_y(const IntegralImage& ii, int x, int y, int size) {
  const int half = size / 2;
  return ii.block_sum(y, x - half, half, size) - ii.block_sum(y - half, x - half, half, size);
}

namespace {

// The even-sized Haar boxes anchored at integer (x, y) are centred on
// (x - 0.5, y - 0.5); shift so the filter centre lands nearest to p.
int box_anchor(double p) { return static_cast<int>(std::floor(p + 1.0)); }

}  // namespace

InterestPoint assign_orientation(const IntegralImage& ii, InterestPoint ip) {
  struct Sample {
    double dx;
    double dy;
    double angle;
  };

  const int step = std::max(1, rounded(ip.scale));
  const int haar_size = static_cast<int>(params::kOrientationHaarSize) * step;
  const int radius = static_cast<int>(params::kOrientationRadius);
  const double two_sigma_sq = 2.0 * params::kOrientationSigma * params::kOrientationSigma;

  std::vector<Sample> samples;
  samples.reserve(113);
  for (int j = -radius; j <= radius; ++j) {
    for (int i = -radius; i <= radius; ++i) {
      if (i * i + j * j >= radius * radius) continue;
      const double weight = std::exp(-(i * i + j * j) / two_sigma_sq);
      const int sx = box_anchor(ip.x + i * step);
      const int sy = box_anchor(ip.y + j * step);
      const double dx = weight * haar_x(ii, sx, sy, haar_size);
      const double dy = weight * haar_y(ii, sx, sy, haar_size);
      samples.push_back({dx, dy, wrap_angle(std::atan2(dy, dx))});
    }
  }

  const int window_count = static_cast<int>(std::lround(kTwoPi / params::kOrientationStep));
  double best_magnitude = 0.0;
  double best_x = 0.0;
  double best_y = 0.0;
  for (int k = 0; k < window_count; ++k) {
    const double start = k * params::kOrientationStep;
    const double end = start + params::kOrientationWindow;
    double sum_x = 0.0;
    double sum_y = 0.0;
    for (const Sample& s : samples) {
      if (s.dx == 0.0 && s.dy == 0.0) continue;
      const bool inside = end < kTwoPi
                              ? (s.angle >= start && s.angle < end)
                              : (s.angle >= start || s.angle < end - kTwoPi);
      if (inside) {
        sum_x += s.dx;
        sum_y += s.dy;
      }
    }
    const double magnitude = sum_x * sum_x + sum_y * sum_y;
    if (magnitude > best_magnitude) {
      best_magnitude = magnitude;
      best_x = sum_x;
      best_y = sum_y;
    }
  }

  const double tolerance = params::kFlatTolerance;
  ip.orientation = best_magnitude > tolerance * tolerance ? wrap_angle(std::atan2(best_y, best_x))
                                                          : 0.0;
  return ip;
}

Descriptor extract_descriptor(const IntegralImage& ii, const InterestPoint& ip, bool upright) {
  const double scale = ip.scale;
  const double angle = upright ? 0.0 : ip.orientation;
  const double co = std::cos(angle);
  const double si = std::sin(angle);
  const int haar_size = static_cast<int>(params::kDescriptorHaarSize) *
                        std::max(1, rounded(scale));
  const double sigma = params::kDescriptorSigma * scale;
  const double two_sigma_sq = 2.0 * sigma * sigma;
  constexpr int kSide = params::kDescriptorSubregions * params::kDescriptorSamples;
  const double half_window = params::kDescriptorWindow / 2.0;

  Descriptor out;
  out.laplacian_sign = ip.laplacian_sign;
  for (int row = 0; row < kSide; ++row) {
    const double v = (row + 0.5 - half_window) * scale;
    for (int col = 0; col < kSide; ++col) {
      const double u = (col + 0.5 - half_window) * scale;
      const int sx = box_anchor(ip.x + u * co - v * si);
      const int sy = box_anchor(ip.y + u * si + v * co);
      const double weight = std::exp(-(u * u + v * v) / two_sigma_sq);
      const double rx = haar_x(ii, sx, sy, haar_size);
      const double ry = haar_y(ii, sx, sy, haar_size);
      // Gradient expressed in the keypoint's rotated frame.
      const double du = weight * (rx * co + ry * si);
      const double dv = weight * (-rx * si + ry * co);

      const int subregion = (row / params::kDescriptorSamples) * params::kDescriptorSubregions +
                            col / params::kDescriptorSamples;
      auto bin = out.components.segment<4>(4 * subregion);
      bin[0] += du;
      bin[1] += dv;
      bin[2] += std::abs(du);
      bin[3] += std::abs(dv);
    }
  }

  const double norm = out.components.norm();
  if (norm > params::kFlatTolerance) {
    out.components /= norm;
  } else {
    out.components.setZero();
  }
  return out;
}

Features extract_features(const GrayImage& gray, const ExtractionConfig& config) {
  validate(config);
  check_size(gray.width(), gray.height());
  const IntegralImage ii = build_integral(gray);
  const std::vector<ResponseMap> maps = build_response_maps(ii, config);

  Features features;
  features.points = detect_interest_points(maps, config.threshold);
  features.descriptors.reserve(features.points.size());
  for (InterestPoint& ip : features.points) {
    if (!config.upright) ip = assign_orientation(ii, ip);
    features.descriptors.push_back(extract_descriptor(ii, ip, config.upright));
  }
  return features;
}

Features extract_features(const RasterImage& img, const ExtractionConfig& config) {
  return extract_features(to_grayscale(img), config);
}

}  // namespace arfex
