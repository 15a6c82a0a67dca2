#include "arfex/geometry.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <limits>
#include <random>

namespace arfex {
namespace {

constexpr double kCollinearTolerance = 1e-9;

// Maps the bounding box of `points` into the unit square (uniform scale).
Eigen::Matrix3d unit_square_transform(std::span<const Eigen::Vector2d> points) {
  Eigen::Vector2d lo = points.front();
  Eigen::Vector2d hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double extent = (hi - lo).maxCoeff();
  if (!(extent > 0.0)) {
    throw Error(ErrorKind::DegenerateConfiguration, "all points coincide");
  }
  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  t(0, 0) = t(1, 1) = 1.0 / extent;
  t(0, 2) = -lo.x() / extent;
  t(1, 2) = -lo.y() / extent;
  return t;
}

double triangle_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const Eigen::Vector2d u = b - a;
  const Eigen::Vector2d v = c - a;
  return 0.5 * std::abs(u.x() * v.y() - u.y() * v.x());
}

int sample_size(TransformModel model) { return model == TransformModel::Homography ? 4 : 2; }

Homography estimate(std::span<const Correspondence> pairs, TransformModel model) {
  return model == TransformModel::Homography ? estimate_homography(pairs)
                                             : estimate_similarity(pairs);
}

struct Consensus {
  std::vector<int> inliers;
  double error_sum = 0.0;
};

Consensus evaluate(const Homography& h, std::span<const Correspondence> pairs, double threshold) {
  Consensus c;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double e = reprojection_error(h, pairs[i]);
    if (e <= threshold) {
      c.inliers.push_back(static_cast<int>(i));
      c.error_sum += e;
    }
  }
  return c;
}

bool better(const Consensus& a, const Consensus& b) {
  if (a.inliers.size() != b.inliers.size()) return a.inliers.size() > b.inliers.size();
  return a.error_sum < b.error_sum;
}

std::vector<Correspondence> gather(std::span<const Correspondence> pairs,
                                   const std::vector<int>& indices) {
  std::vector<Correspondence> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(pairs[static_cast<std::size_t>(i)]);
  return out;
}

std::size_t iterations_needed(double inlier_ratio, int sample, double confidence) {
  const double all_inliers = std::pow(inlier_ratio, sample);
  if (all_inliers >= 1.0 - 1e-12) return 1;
  if (all_inliers <= 0.0) return std::numeric_limits<std::size_t>::max();
  const double n = std::log(1.0 - confidence) / std::log(1.0 - all_inliers);
  if (!(n < 1e15)) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(std::ceil(std::max(n, 1.0)));
}

}  // namespace

Homography Homography::from_matrix(const Eigen::Matrix3d& m) {
  if (!m.allFinite() || std::abs(m(2, 2)) <= std::numeric_limits<double>::epsilon() * m.norm()) {
    throw Error(ErrorKind::SingularSystem, "homography has h33 = 0");
  }
  const Eigen::Matrix3d h = m / m(2, 2);
  if (!(std::abs(h.determinant()) > 1e-12)) {
    throw Error(ErrorKind::SingularSystem, "homography is not invertible");
  }
  return Homography(h);
}

Homography estimate_homography(std::span<const Correspondence> pairs) {
  const std::size_t n = pairs.size();
  if (n < 4) {
    throw Error(ErrorKind::DegenerateConfiguration, "homography needs at least 4 pairs");
  }

  std::vector<Eigen::Vector2d> src(n);
  std::vector<Eigen::Vector2d> dst(n);
  for (std::size_t i = 0; i < n; ++i) {
    src[i] = pairs[i].source;
    dst[i] = pairs[i].target;
  }
  const Eigen::Matrix3d src_t = unit_square_transform(src);
  const Eigen::Matrix3d dst_t = unit_square_transform(dst);
  for (std::size_t i = 0; i < n; ++i) {
    src[i] = (src_t * src[i].homogeneous()).hnormalized();
    dst[i] = (dst_t * dst[i].homogeneous()).hnormalized();
  }

  if (n == 4) {
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a + 1; b < 4; ++b) {
        for (std::size_t c = b + 1; c < 4; ++c) {
          if (triangle_area(src[a], src[b], src[c]) <= kCollinearTolerance) {
            throw Error(ErrorKind::DegenerateConfiguration,
                        "three source points are collinear");
          }
        }
      }
    }
  }

  Eigen::MatrixXd a(2 * n, 8);
  Eigen::VectorXd b(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = src[i].x();
    const double y = src[i].y();
    const double u = dst[i].x();
    const double v = dst[i].y();
    const auto r = static_cast<Eigen::Index>(2 * i);
    a.row(r) << x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y;
    a.row(r + 1) << 0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y;
    b(r) = u;
    b(r + 1) = v;
  }

  Eigen::Matrix<double, 8, 1> solution;
  if (n == 4) {
    const Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(a);
    if (!lu.isInvertible()) throw Error(ErrorKind::SingularSystem, "DLT system is singular");
    solution = lu.solve(b);
  } else {
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 8) throw Error(ErrorKind::SingularSystem, "DLT system is rank deficient");
    solution = qr.solve(b);
  }

  Eigen::Matrix3d normalized;
  normalized << solution(0), solution(1), solution(2),
                solution(3), solution(4), solution(5),
                solution(6), solution(7), 1.0;
  return Homography::from_matrix(dst_t.inverse() * normalized * src_t);
}

Homography estimate_similarity(std::span<const Correspondence> pairs) {
  const auto n = static_cast<Eigen::Index>(pairs.size());
  if (n < 2) {
    throw Error(ErrorKind::DegenerateConfiguration, "similarity needs at least 2 pairs");
  }
  Eigen::Matrix2Xd src(2, n);
  Eigen::Matrix2Xd dst(2, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    src.col(i) = pairs[static_cast<std::size_t>(i)].source;
    dst.col(i) = pairs[static_cast<std::size_t>(i)].target;
  }
  const Eigen::Vector2d spread = (src.colwise() - src.rowwise().mean()).rowwise().norm();
  if (!(spread.norm() > kCollinearTolerance)) {
    throw Error(ErrorKind::DegenerateConfiguration, "all source points coincide");
  }
  return Homography::from_matrix(Eigen::umeyama(src, dst, true));
}

void validate(const RansacConfig& config) {
  if (config.max_iterations < 1) {
    throw Error(ErrorKind::InvalidArgument, "max_iterations must be >= 1");
  }
  if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "confidence must be in (0,1)");
  }
  if (!(config.inlier_threshold > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "inlier threshold must be positive");
  }
  if (config.min_inliers_floor < 1 || !(config.min_inlier_fraction >= 0.0) ||
      config.min_inlier_fraction > 1.0) {
    throw Error(ErrorKind::InvalidArgument, "invalid minimum inlier settings");
  }
}

int required_inliers(const RansacConfig& config, std::size_t match_count) {
  const auto fraction = static_cast<int>(
      std::ceil(config.min_inlier_fraction * static_cast<double>(match_count) - 1e-9));
  return std::max(config.min_inliers_floor, fraction);
}

double reprojection_error(const Homography& h, const Correspondence& pair) {
  const Eigen::Vector3d mapped = h.matrix() * pair.source.homogeneous();
  if (std::abs(mapped.z()) <= 1e-12) return std::numeric_limits<double>::infinity();
  return (mapped.hnormalized() - pair.target).norm();
}

VerificationResult ransac_verify(std::span<const Correspondence> pairs,
                                 const RansacConfig& config) {
  validate(config);
  const std::size_t n = pairs.size();
  if (n < 4) {
    throw Error(ErrorKind::InsufficientMatches,
                "RANSAC needs at least 4 matches, got " + std::to_string(n));
  }
  const int sample = sample_size(config.model);

  std::mt19937_64 rng(config.seed);
  std::vector<int> indices;
  std::vector<Correspondence> minimal(static_cast<std::size_t>(sample));

  std::optional<Homography> best_model;
  Consensus best;
  std::size_t needed = static_cast<std::size_t>(config.max_iterations);
  for (std::size_t iter = 0; iter < needed; ++iter) {
    indices.clear();
    while (indices.size() < static_cast<std::size_t>(sample)) {
      const int candidate = static_cast<int>(rng() % n);
      if (std::find(indices.begin(), indices.end(), candidate) == indices.end()) {
        indices.push_back(candidate);
      }
    }
    for (int k = 0; k < sample; ++k) {
      minimal[static_cast<std::size_t>(k)] = pairs[static_cast<std::size_t>(indices[static_cast<std::size_t>(k)])];
    }

    Homography model;
    try {
      model = estimate(minimal, config.model);
    } catch (const Error&) {
      continue;
    }
    Consensus consensus = evaluate(model, pairs, config.inlier_threshold);
    if (!best_model || better(consensus, best)) {
      best = std::move(consensus);
      best_model = model;
      const double ratio = static_cast<double>(best.inliers.size()) / static_cast<double>(n);
      needed = std::min(static_cast<std::size_t>(config.max_iterations),
                        std::max(iter + 1, iterations_needed(ratio, sample, config.confidence)));
    }
  }

  VerificationResult result;
  if (!best_model || best.inliers.size() < static_cast<std::size_t>(sample)) return result;

  // Refit on the consensus set while that does not shrink it.
  for (int round = 0; round < 5; ++round) {
    Homography refit;
    try {
      refit = estimate(gather(pairs, best.inliers), config.model);
    } catch (const Error&) {
      break;
    }
    Consensus refined = evaluate(refit, pairs, config.inlier_threshold);
    if (refined.inliers.size() < best.inliers.size()) break;
    const bool unchanged = refined.inliers == best.inliers;
    best = std::move(refined);
    best_model = refit;
    if (unchanged) break;
  }

  result.inlier_indices = best.inliers;
  result.mean_reprojection_error =
      best.inliers.empty() ? 0.0 : best.error_sum / static_cast<double>(best.inliers.size());
  result.verified = best.inliers.size() >= static_cast<std::size_t>(required_inliers(config, n));
  if (result.verified) result.model = best_model;
  return result;
}

}  // namespace arfex
