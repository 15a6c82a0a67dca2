#include "arfex/json_io.hpp"

#include <set>

namespace arfex {
namespace {

template <typename Fn>
auto parsing(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
  }
}

Json descriptor_to_json(const Descriptor& d) {
  Json arr = Json::array();
  for (double v : d.components) arr.push_back(v);
  return arr;
}

int sign_from_json(const Json& j) {
  const int sign = j.get<int>();
  if (sign != 1 && sign != -1) throw Error(ErrorKind::ParseError, "laplacian must be +1 or -1");
  return sign;
}

Json homography_to_json(const Homography& h) {
  Json arr = Json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) arr.push_back(h.matrix()(r, c));
  }
  return arr;
}

}  // namespace

Json config_to_json(const ExtractionConfig& config) {
  Json j;
  j["octaves"] = config.octaves;
  j["intervals"] = config.intervals;
  j["threshold"] = config.threshold;
  j["upright"] = config.upright;
  j["hessian_dxy_weight"] = params::kDxyWeight;
  j["orientation"] = {
      {"disc_radius", params::kOrientationRadius},
      {"haar_size", params::kOrientationHaarSize},
      {"gaussian_sigma", params::kOrientationSigma},
      {"window", params::kOrientationWindow},
      {"step", params::kOrientationStep},
  };
  j["descriptor"] = {
      {"window", params::kDescriptorWindow},
      {"subregions", params::kDescriptorSubregions},
      {"samples", params::kDescriptorSamples},
      {"haar_size", params::kDescriptorHaarSize},
      {"gaussian_sigma", params::kDescriptorSigma},
  };
  return j;
}

ExtractionConfig config_from_json(const Json& j) {
  return parsing("extraction config", [&] {
    ExtractionConfig config;
    config.octaves = j.at("octaves").get<int>();
    config.intervals = j.at("intervals").get<int>();
    config.threshold = j.at("threshold").get<double>();
    config.upright = j.at("upright").get<bool>();
    try {
      validate(config);
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, e.what());
    }
    return config;
  });
}

Json point_to_json(const InterestPoint& ip) {
  Json j;
  j["x"] = ip.x;
  j["y"] = ip.y;
  j["scale"] = ip.scale;
  j["orientation"] = ip.orientation;
  j["laplacian"] = ip.laplacian_sign;
  j["response"] = ip.response;
  return j;
}

InterestPoint point_from_json(const Json& j) {
  return parsing("interest point", [&] {
    InterestPoint ip;
    ip.x = j.at("x").get<double>();
    ip.y = j.at("y").get<double>();
    ip.scale = j.at("scale").get<double>();
    ip.orientation = j.at("orientation").get<double>();
    ip.laplacian_sign = sign_from_json(j.at("laplacian"));
    ip.response = j.at("response").get<double>();
    return ip;
  });
}

Json features_to_json(const Features& features, const ExtractionConfig& config) {
  Json j;
  j["config"] = config_to_json(config);
  Json points = Json::array();
  for (const InterestPoint& ip : features.points) points.push_back(point_to_json(ip));
  j["points"] = std::move(points);
  Json descriptors = Json::array();
  for (const Descriptor& d : features.descriptors) descriptors.push_back(descriptor_to_json(d));
  j["descriptors"] = std::move(descriptors);
  return j;
}

Json blobs_to_json(std::span<const Blob> blobs, int threshold, Polarity polarity) {
  Json j;
  j["threshold"] = threshold;
  j["polarity"] = polarity == Polarity::White ? "white" : "black";
  Json arr = Json::array();
  for (const Blob& b : blobs) {
    Json entry;
    entry["count"] = b.pixel_count;
    entry["bbox"] = {b.x_min, b.y_min, b.x_max, b.y_max};
    entry["centroid"] = {b.centroid_x, b.centroid_y};
    arr.push_back(std::move(entry));
  }
  j["blobs"] = std::move(arr);
  return j;
}

Json query_result_to_json(const QueryResult& result) {
  Json j;
  j["best"] = result.best;
  if (result.associated_info) {
    j["associated_info"] = {{"name", result.associated_info->name},
                            {"info", result.associated_info->info}};
  }
  if (result.frame) {
    Json frame = Json::array();
    for (const auto& corner : *result.frame) frame.push_back({corner.x(), corner.y()});
    j["frame"] = std::move(frame);
  }
  j["query_points"] = result.query_features.points.size();

  Json ranked = Json::array();
  for (const Candidate& c : result.ranked) {
    Json entry;
    entry["id"] = c.id;
    entry["match_count"] = c.match_count();
    entry["verified"] = c.verification.verified;
    entry["inlier_count"] = c.inlier_count();
    entry["mean_reprojection_error"] = c.verification.mean_reprojection_error;
    entry["inlier_indices"] = c.verification.inlier_indices;
    entry["homography"] =
        c.verification.model ? homography_to_json(*c.verification.model) : Json(nullptr);
    Json matches = Json::array();
    for (const Match& m : c.matches) matches.push_back({m.query_index, m.target_index, m.distance});
    entry["matches"] = std::move(matches);
    ranked.push_back(std::move(entry));
  }
  j["ranked"] = std::move(ranked);
  return j;
}

Json database_to_json(const Database& db) {
  Json j;
  j["version"] = db.version;
  j["extraction_config"] = config_to_json(db.extraction_config);
  Json objects = Json::array();
  for (const ObjectRecord& r : db.records) {
    Json o;
    o["id"] = r.id;
    o["name"] = r.name;
    o["info"] = r.info;
    o["image_size"] = {r.image_width, r.image_height};
    Json keypoints = Json::array();
    for (const InterestPoint& ip : r.keypoints) keypoints.push_back(point_to_json(ip));
    o["keypoints"] = std::move(keypoints);
    Json descriptors = Json::array();
    for (const Descriptor& d : r.descriptors) descriptors.push_back(descriptor_to_json(d));
    o["descriptors"] = std::move(descriptors);
    objects.push_back(std::move(o));
  }
  j["objects"] = std::move(objects);
  return j;
}

Database database_from_json(const Json& j) {
  Database db;
  db.version = parsing("database", [&] { return j.at("version").get<int>(); });
  if (db.version != kDatabaseVersion) {
    throw Error(ErrorKind::VersionMismatch,
                "database version " + std::to_string(db.version) + " is not supported (expected " +
                    std::to_string(kDatabaseVersion) + ")");
  }
  db.extraction_config = config_from_json(parsing("database", [&] {
    return j.at("extraction_config");
  }));

  std::set<std::string> seen;
  parsing("database objects", [&] {
    for (const Json& o : j.at("objects")) {
      ObjectRecord r;
      r.id = o.at("id").get<std::string>();
      r.name = o.at("name").get<std::string>();
      r.info = o.at("info").get<std::string>();
      const Json& size = o.at("image_size");
      if (size.size() != 2) throw Error(ErrorKind::ParseError, "image_size needs two entries");
      r.image_width = size.at(0).get<int>();
      r.image_height = size.at(1).get<int>();
      for (const Json& p : o.at("keypoints")) r.keypoints.push_back(point_from_json(p));
      const Json& descriptors = o.at("descriptors");
      if (descriptors.size() != r.keypoints.size() || r.keypoints.empty()) {
        throw Error(ErrorKind::ParseError,
                    "object '" + r.id + "' needs equal, non-zero keypoint and descriptor counts");
      }
      for (std::size_t i = 0; i < descriptors.size(); ++i) {
        const Json& values = descriptors[i];
        if (values.size() != static_cast<std::size_t>(params::kDescriptorLength)) {
          throw Error(ErrorKind::ParseError, "descriptor must have 64 components");
        }
        Descriptor d;
        for (int k = 0; k < params::kDescriptorLength; ++k) {
          d.components(k) = values[static_cast<std::size_t>(k)].get<double>();
        }
        d.laplacian_sign = r.keypoints[i].laplacian_sign;
        r.descriptors.push_back(d);
      }
      if (!seen.insert(r.id).second) {
        throw Error(ErrorKind::ParseError, "duplicate object id '" + r.id + "'");
      }
      db.records.push_back(std::move(r));
    }
    return 0;
  });
  return db;
}

std::string to_text(const Json& j) { return j.dump() + "\n"; }

}  // namespace arfex
