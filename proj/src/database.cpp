#include "arfex/database.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <tuple>
#include <utility>

#include "arfex/json_io.hpp"

namespace arfex {
namespace {

std::vector<Correspondence> correspondences(const std::vector<Match>& matches,
                                            const std::vector<InterestPoint>& query_points,
                                            const ObjectRecord& record) {
  std::vector<Correspondence> pairs;
  pairs.reserve(matches.size());
  for (const Match& m : matches) {
    const InterestPoint& src = record.keypoints[static_cast<std::size_t>(m.target_index)];
    const InterestPoint& dst = query_points[static_cast<std::size_t>(m.query_index)];
    pairs.push_back({Eigen::Vector2d(src.x, src.y), Eigen::Vector2d(dst.x, dst.y)});
  }
  return pairs;
}

bool ranks_before(const Candidate& a, const Candidate& b) {
  const auto key = [](const Candidate& c) {
    return std::make_tuple(!c.verification.verified, -c.inlier_count(), -c.match_count());
  };
  if (key(a) != key(b)) return key(a) < key(b);
  return a.id < b.id;
}

}  // namespace

const ObjectRecord* Database::find(const std::string& id) const {
  const auto it = std::find_if(records.begin(), records.end(),
                               [&id](const ObjectRecord& r) { return r.id == id; });
  return it == records.end() ? nullptr : &*it;
}

Database index_image(Database db, const RasterImage& img, std::string id, std::string name,
                     std::string info) {
  if (db.find(id) != nullptr) {
    throw Error(ErrorKind::DuplicateId, "object id '" + id + "' already indexed");
  }
  Features features = extract_features(img, db.extraction_config);
  if (features.points.empty()) {
    throw Error(ErrorKind::NoFeatures, "no interest points found in image for '" + id + "'");
  }

  ObjectRecord record;
  record.id = std::move(id);
  record.name = std::move(name);
  record.info = std::move(info);
  record.image_width = img.width();
  record.image_height = img.height();
  record.keypoints = std::move(features.points);
  record.descriptors = std::move(features.descriptors);
  db.records.push_back(std::move(record));
  return db;
}

QueryResult query_image(const Database& db, const RasterImage& img, const QueryConfig& config) {
  validate(config.match);
  validate(config.ransac);

  QueryResult result;
  result.query_features = extract_features(img, db.extraction_config);
  if (result.query_features.points.empty()) {
    throw Error(ErrorKind::NoFeatures, "no interest points found in query image");
  }

  for (const ObjectRecord& record : db.records) {
    Candidate candidate;
    candidate.id = record.id;
    candidate.matches =
        match_descriptors(result.query_features.descriptors, record.descriptors, config.match);
    if (candidate.matches.size() >= 4) {
      const auto pairs = correspondences(candidate.matches, result.query_features.points, record);
      candidate.verification = ransac_verify(pairs, config.ransac);
    }
    result.ranked.push_back(std::move(candidate));
  }
  std::sort(result.ranked.begin(), result.ranked.end(), ranks_before);

  if (!result.ranked.empty() && result.ranked.front().verification.verified) {
    const Candidate& top = result.ranked.front();
    const ObjectRecord& record = *db.find(top.id);
    result.best = record.id;
    result.associated_info = AssociatedInfo{record.name, record.info};

    const double w = record.image_width - 1;
    const double h = record.image_height - 1;
    const std::array<Eigen::Vector2d, 4> corners = {
        Eigen::Vector2d(0, 0), Eigen::Vector2d(w, 0), Eigen::Vector2d(w, h),
        Eigen::Vector2d(0, h)};
    try {
      std::array<Eigen::Vector2d, 4> frame;
      for (std::size_t i = 0; i < 4; ++i) frame[i] = top.verification.model->apply(corners[i]);
      result.frame = frame;
    } catch (const Error&) {
      // A corner at infinity leaves the frame unset.
    }
  }
  return result;
}

void save_db(const Database& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << to_text(database_to_json(db));
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
}

Database load_db(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::IoError, "cannot read " + path.string());

  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return database_from_json(j);
}

}  // namespace arfex
