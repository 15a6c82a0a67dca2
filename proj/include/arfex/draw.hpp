#ifndef ARFEX_DRAW_HPP
#define ARFEX_DRAW_HPP

#include <Eigen/Core>

#include <array>
#include <span>

#include "arfex/features.hpp"
#include "arfex/image.hpp"

namespace arfex {

inline constexpr Rgb kOverlayRed{255, 0, 0};

// 1 px strokes; pixels outside the image are skipped.
void draw_circle(RasterImage& img, int cx, int cy, int radius, Rgb color = kOverlayRed);
void draw_line(RasterImage& img, int x0, int y0, int x1, int y1, Rgb color = kOverlayRed);
void draw_polygon(RasterImage& img, std::span<const Eigen::Vector2d> corners,
                  Rgb color = kOverlayRed);

/// Circle of radius 2.5 * scale plus an orientation tick from the centre.
void draw_keypoint(RasterImage& img, const InterestPoint& ip, Rgb color = kOverlayRed);

RasterImage keypoint_overlay(const RasterImage& img, std::span<const InterestPoint> points);

}  // namespace arfex

#endif  // ARFEX_DRAW_HPP
