#include "arfex/draw.hpp"

#include <cmath>
#include <cstdlib>

namespace arfex {
namespace {

void plot(RasterImage& img, int x, int y, Rgb color) {
  if (img.contains(x, y)) img.at(x, y) = color;
}

int rounded(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

void draw_circle(RasterImage& img, int cx, int cy, int radius, Rgb color) {
  if (radius <= 0) {
    plot(img, cx, cy, color);
    return;
  }
  // Midpoint circle, one octant mirrored eight ways.
  int x = radius;
  int y = 0;
  int err = 1 - radius;
  while (x >= y) {
    plot(img, cx + x, cy + y, color);
    plot(img, cx + y, cy + x, color);
    plot(img, cx - y, cy + x, color);
    plot(img, cx - x, cy + y, color);
    plot(img, cx - x, cy - y, color);
    plot(img, cx - y, cy - x, color);
    plot(img, cx + y, cy - x, color);
    plot(img, cx + x, cy - y, color);
    ++y;
    if (err < 0) {
      err += 2 * y + 1;
    } else {
      --x;
      err += 2 * (y - x) + 1;
    }
  }
}

void draw_line(RasterImage& img, int x0, int y0, int x1, int y1, Rgb color) {
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    plot(img, x0, y0, color);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void draw_polygon(RasterImage& img, std::span<const Eigen::Vector2d> corners, Rgb color) {
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Eigen::Vector2d& a = corners[i];
    const Eigen::Vector2d& b = corners[(i + 1) % corners.size()];
    if (!a.allFinite() || !b.allFinite()) continue;
    // Far-off corners would make the line walk very long.
    constexpr double kLimit = 1e6;
    if (a.cwiseAbs().maxCoeff() > kLimit || b.cwiseAbs().maxCoeff() > kLimit) continue;
    draw_line(img, rounded(a.x()), rounded(a.y()), rounded(b.x()), rounded(b.y()), color);
  }
}

void draw_keypoint(RasterImage& img, const InterestPoint& ip, Rgb color) {
  const double radius = 2.5 * ip.scale;
  const int cx = rounded(ip.x);
  const int cy = rounded(ip.y);
  draw_circle(img, cx, cy, rounded(radius), color);
  draw_line(img, cx, cy, rounded(ip.x + radius * std::cos(ip.orientation)),
            rounded(ip.y + radius * std::sin(ip.orientation)), color);
}

RasterImage keypoint_overlay(const RasterImage& img, std::span<const InterestPoint> points) {
  RasterImage out = img;
  for (const InterestPoint& ip : points) draw_keypoint(out, ip);
  return out;
}

}  // namespace arfex
