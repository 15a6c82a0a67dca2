#ifndef ARFEX_DATABASE_HPP
#define ARFEX_DATABASE_HPP

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "arfex/features.hpp"
#include "arfex/geometry.hpp"
#include "arfex/image.hpp"
#include "arfex/matching.hpp"

namespace arfex {

inline constexpr int kDatabaseVersion = 1;
inline constexpr const char* kUnrecognized = "unrecognized";

struct ObjectRecord {
  std::string id;
  std::string name;
  std::string info;
  int image_width = 0;
  int image_height = 0;
  std::vector<InterestPoint> keypoints;
  std::vector<Descriptor> descriptors;

  friend bool operator==(const ObjectRecord&, const ObjectRecord&) = default;
};

struct Database {
  int version = kDatabaseVersion;
  ExtractionConfig extraction_config;
  std::vector<ObjectRecord> records;

  const ObjectRecord* find(const std::string& id) const;

  friend bool operator==(const Database&, const Database&) = default;
};

/// Extracts features from `img` under db.extraction_config and appends a
/// record. Throws DuplicateId or NoFeatures.
Database index_image(Database db, const RasterImage& img, std::string id, std::string name,
                     std::string info);

struct QueryConfig {
  MatchConfig match;
  RansacConfig ransac;
};

struct Candidate {
  std::string id;
  std::vector<Match> matches;
  VerificationResult verification;

  int match_count() const noexcept { return static_cast<int>(matches.size()); }
  int inlier_count() const noexcept {
    return static_cast<int>(verification.inlier_indices.size());
  }
};

struct AssociatedInfo {
  std::string name;
  std::string info;
};

struct QueryResult {
  /// Sorted by (verified desc, inlier count desc, match count desc, id asc).
  std::vector<Candidate> ranked;
  /// Id of the first verified candidate, or kUnrecognized.
  std::string best = kUnrecognized;
  std::optional<AssociatedInfo> associated_info;
  /// Corners of the best object's image mapped into the query image,
  /// clockwise from (0, 0).
  std::optional<std::array<Eigen::Vector2d, 4>> frame;
  /// Features of the query image; match query indices refer to these.
  Features query_features;

  bool recognized() const noexcept { return associated_info.has_value(); }
};

/// Matches and verifies `img` against every record. Throws NoFeatures for a
/// query without interest points.
QueryResult query_image(const Database& db, const RasterImage& img, const QueryConfig& config);

/// Versioned JSON document. Throws IoError, ParseError or VersionMismatch.
void save_db(const Database& db, const std::filesystem::path& path);
Database load_db(const std::filesystem::path& path);

}  // namespace arfex

#endif  // ARFEX_DATABASE_HPP
