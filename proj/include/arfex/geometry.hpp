#ifndef ARFEX_GEOMETRY_HPP
#define ARFEX_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "arfex/error.hpp"

namespace arfex {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

/// Projective mapping with division by the third coordinate.
/// Throws PointAtInfinity when the denominator is within 1e-12 of zero.
template <typename Derived, typename PointDerived>
Point2<typename Derived::Scalar> project_point(const Eigen::MatrixBase<Derived>& h,
                                               const Eigen::MatrixBase<PointDerived>& p) {
  using Scalar = typename Derived::Scalar;
  static_assert(Derived::RowsAtCompileTime == 3 && Derived::ColsAtCompileTime == 3);
  const Eigen::Matrix<Scalar, 3, 1> mapped = h * p.homogeneous();
  if (std::abs(mapped.z()) <= Scalar(1e-12)) {
    throw Error(ErrorKind::PointAtInfinity, "point maps to infinity");
  }
  return mapped.hnormalized();
}

/// Invertible 3x3 projective transform normalized to h33 = 1.
class Homography {
 public:
  Homography() : h_(Eigen::Matrix3d::Identity()) {}

  /// Scales `m` so that m(2,2) = 1. Throws SingularSystem when m(2,2) is zero
  /// or the normalized matrix has |det| <= 1e-12.
  static Homography from_matrix(const Eigen::Matrix3d& m);

  const Eigen::Matrix3d& matrix() const noexcept { return h_; }
  Eigen::Vector2d apply(const Eigen::Vector2d& p) const { return project_point(h_, p); }
  Homography inverse() const { return from_matrix(h_.inverse()); }

  friend bool operator==(const Homography& a, const Homography& b) { return a.h_ == b.h_; }

 private:
  explicit Homography(const Eigen::Matrix3d& h) : h_(h) {}

  Eigen::Matrix3d h_;
};

struct Correspondence {
  Eigen::Vector2d source;
  Eigen::Vector2d target;
};

/// Direct linear transform with h33 fixed to 1. Exactly four pairs are solved
/// as an 8x8 system; more pairs by linear least squares. Coordinates are
/// rescaled into the unit square before solving.
/// Throws DegenerateConfiguration for fewer than four pairs, for four pairs
/// with three collinear (or repeated) source points, and SingularSystem when
/// the system is rank deficient.
Homography estimate_homography(std::span<const Correspondence> pairs);

/// Least-squares rotation + uniform scale + translation (two or more pairs).
Homography estimate_similarity(std::span<const Correspondence> pairs);

enum class TransformModel { Homography, Similarity };

struct RansacConfig {
  int max_iterations = 2000;
  double confidence = 0.99;
  double inlier_threshold = 3.0;
  int min_inliers_floor = 8;
  double min_inlier_fraction = 0.15;
  std::uint64_t seed = 0;
  TransformModel model = TransformModel::Homography;
};

void validate(const RansacConfig& config);

/// max(min_inliers_floor, ceil(min_inlier_fraction * match_count)).
int required_inliers(const RansacConfig& config, std::size_t match_count);

struct VerificationResult {
  std::optional<Homography> model;  // set iff verified
  std::vector<int> inlier_indices;  // ascending
  double mean_reprojection_error = 0.0;
  bool verified = false;
};

/// Distance between h(source) and target; infinity when source maps to infinity.
double reprojection_error(const Homography& h, const Correspondence& pair);

/// Adaptive RANSAC over minimal samples, followed by least-squares refits on
/// the consensus set. Deterministic for a fixed seed.
/// Throws InsufficientMatches for fewer than four pairs.
VerificationResult ransac_verify(std::span<const Correspondence> pairs,
                                 const RansacConfig& config);

}  // namespace arfex

#endif  // ARFEX_GEOMETRY_HPP
