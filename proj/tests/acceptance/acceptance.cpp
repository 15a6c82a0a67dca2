// Acceptance suite: one line per criterion, exit status 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "arfex/arfex.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace arfex;
namespace t = arfex::testing;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // <= 0 means no runtime bound
  std::function<Outcome()> run;
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared fixtures.

constexpr int kTextureSize = 256;
constexpr std::uint64_t kTextureSeed = 20240915;
constexpr double kMatchRadius = 2.0;

GrayImage texture_image() {
  return t::render(t::random_texture(20, kTextureSize, kTextureSize, kTextureSeed, 12.0, 6.0, 16.0), kTextureSize,
                   kTextureSize);
}

Eigen::Matrix3d rotation_15() {
  const double c = (kTextureSize - 1) / 2.0;
  return t::centred_similarity(15.0 * kDeg, 1.0, c, c);
}

int nearest_point(const std::vector<InterestPoint>& points, const Eigen::Vector2d& at,
                  double radius) {
  int best = -1;
  double best_d = radius;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = std::hypot(points[i].x - at.x(), points[i].y - at.y());
    if (d <= best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

struct RepeatabilityStats {
  int considered = 0;
  int repeated = 0;
  int correctly_matched = 0;
  std::string json;  // feature artifacts of both images
};

RepeatabilityStats rotation_repeatability() {
  const ExtractionConfig config;
  const t::Texture texture = t::random_texture(20, kTextureSize, kTextureSize, kTextureSeed, 12.0, 6.0, 16.0);
  const GrayImage original = t::render(texture, kTextureSize, kTextureSize);
  const Eigen::Matrix3d rot = rotation_15();
  const GrayImage rotated = t::render(texture, kTextureSize, kTextureSize, rot);

  const Features a = extract_features(original, config);
  const Features b = extract_features(rotated, config);

  RepeatabilityStats s;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const Eigen::Vector2d mapped = project_point(rot, Eigen::Vector2d(a.points[i].x, a.points[i].y));
    if (mapped.x() < 0 || mapped.y() < 0 || mapped.x() >= kTextureSize ||
        mapped.y() >= kTextureSize) {
      continue;
    }
    ++s.considered;
    if (nearest_point(b.points, mapped, kMatchRadius) < 0) continue;
    ++s.repeated;

    // Nearest neighbour in descriptor space among same-sign descriptors.
    int nn = -1;
    double nn_d = 1e300;
    for (std::size_t j = 0; j < b.descriptors.size(); ++j) {
      if (b.descriptors[j].laplacian_sign != a.descriptors[i].laplacian_sign) continue;
      const double d = distance(a.descriptors[i], b.descriptors[j]);
      if (d < nn_d) {
        nn_d = d;
        nn = static_cast<int>(j);
      }
    }
    if (nn >= 0 && std::hypot(b.points[static_cast<std::size_t>(nn)].x - mapped.x(),
                              b.points[static_cast<std::size_t>(nn)].y - mapped.y()) <= kMatchRadius) {
      ++s.correctly_matched;
    }
  }
  s.json = to_text(features_to_json(a, config)) + to_text(features_to_json(b, config));
  return s;
}

struct RecognitionStats {
  int correct = 0;
  int total = 0;
  bool noise_unrecognized = false;
  std::string detail;
  std::string json;
};

RecognitionStats end_to_end_recognition() {
  constexpr int kObjects = 5;
  constexpr int kSize = 256;
  const double centre = (kSize - 1) / 2.0;

  std::vector<t::Texture> textures;
  Database db;
  for (int k = 0; k < kObjects; ++k) {
    t::Texture texture = t::random_texture(60, kSize, kSize, 5000 + static_cast<std::uint64_t>(k), 6.0);
    texture.support_width = kSize;
    texture.support_height = kSize;
    const GrayImage object = t::render(texture, kSize, kSize);
    db = index_image(std::move(db), to_raster(object), "object-" + std::to_string(k),
                     "Object " + std::to_string(k), "synthetic fixture " + std::to_string(k));
    textures.push_back(std::move(texture));
  }

  QueryConfig config;
  config.ransac.seed = 7;
  RecognitionStats s;
  const Eigen::Matrix3d transform = t::centred_similarity(15.0 * kDeg, 0.8, centre, centre);
  for (int k = 0; k < kObjects; ++k) {
    const GrayImage query = t::add_gaussian_noise(
        t::render(textures[static_cast<std::size_t>(k)], kSize, kSize, transform), 5.0,
        900 + static_cast<std::uint64_t>(k));
    const QueryResult result = query_image(db, to_raster(query), config);
    ++s.total;
    const std::string expected = "object-" + std::to_string(k);
    const bool ok = result.best == expected && result.ranked.front().verification.verified;
    s.correct += ok ? 1 : 0;
    s.detail += fmt("%s:%s(%d/%d) ", expected.c_str(), ok ? "ok" : result.best.c_str(),
                    result.ranked.front().inlier_count(), result.ranked.front().match_count());
    s.json += to_text(query_result_to_json(result));
  }

  const GrayImage noise = t::uniform_noise_image(kSize, kSize, 31337);
  const QueryResult noise_result = query_image(db, to_raster(noise), config);
  s.noise_unrecognized = noise_result.best == kUnrecognized;
  s.detail += fmt("noise:%s", noise_result.best.c_str());
  s.json += to_text(query_result_to_json(noise_result));
  return s;
}

// ---------------------------------------------------------------------------

Outcome integral_exactness() {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int image = 0; image < 100; ++image) {
    const MatrixRXd v = t::random_values(64, 64, 100 + static_cast<std::uint64_t>(image));
    const IntegralImage ii(v);
    for (int k = 0; k < 1000; ++k) {
      const int xa = static_cast<int>(rng() % 64), xb = static_cast<int>(rng() % 64);
      const int ya = static_cast<int>(rng() % 64), yb = static_cast<int>(rng() % 64);
      const Rect r{std::min(xa, xb), std::min(ya, yb), std::max(xa, xb), std::max(ya, yb)};
      worst = std::max(worst, std::abs(box_sum(ii, r) - t::naive_box_sum(v, r)));
    }
  }
  return {worst <= 1e-9, fmt("max abs error %.3g over 100000 rectangles", worst)};
}

Outcome response_oracle() {
  double worst = 0.0;
  long cells = 0;
  for (int image = 0; image < 10; ++image) {
    const MatrixRXd v = t::random_values(64, 64, 500 + static_cast<std::uint64_t>(image));
    for (const ResponseMap& m : build_response_maps(IntegralImage(v), ExtractionConfig{})) {
      for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
          const auto oracle = t::naive_response(v, c * m.stride, r * m.stride, m.filter_size);
          worst = std::max(worst, std::abs(m.responses(r, c) - oracle.determinant));
          ++cells;
        }
      }
    }
  }
  return {worst <= 1e-9, fmt("max abs error %.3g over %ld cells", worst, cells)};
}

Outcome blob_flood_fill() {
  std::mt19937_64 rng(3);
  int agree = 0;
  for (int k = 0; k < 500; ++k) {
    BinaryMask m(32, 32);
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) m(y, x) = uniform(rng, 0, 1) < 0.4 ? 1 : 0;
    }
    const auto blobs = detect_blobs(m);
    agree += t::blob_partition(blobs, 32, 32) == t::flood_fill_partition(m) ? 1 : 0;
  }
  return {agree == 500, fmt("%d/500 masks identical", agree)};
}

Outcome rotation_criterion() {
  const RepeatabilityStats s = rotation_repeatability();
  const double repeat = s.considered ? static_cast<double>(s.repeated) / s.considered : 0.0;
  const double paired = s.repeated ? static_cast<double>(s.correctly_matched) / s.repeated : 0.0;
  return {s.considered > 0 && repeat >= 0.60 && paired >= 0.80,
          fmt("repeatability %d/%d = %.2f (>= 0.60), NN pairing %d/%d = %.2f (>= 0.80)",
              s.repeated, s.considered, repeat, s.correctly_matched, s.repeated, paired)};
}

Outcome photometric_criterion() {
  const ExtractionConfig config;
  const GrayImage original = texture_image();
  const GrayImage adjusted = t::photometric(original, 1.3, 10.0);
  const Features a = extract_features(original, config);
  const Features b = extract_features(adjusted, config);
  int repeated = 0;
  int close = 0;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const int j = nearest_point(b.points, {a.points[i].x, a.points[i].y}, kMatchRadius);
    if (j < 0) continue;
    ++repeated;
    close += distance(a.descriptors[i], b.descriptors[static_cast<std::size_t>(j)]) < 0.1 ? 1 : 0;
  }
  const double frac = repeated ? static_cast<double>(close) / repeated : 0.0;
  return {repeated > 0 && frac >= 0.90,
          fmt("%d/%d repeated points within 0.1 = %.2f (>= 0.90)", close, repeated, frac)};
}

Outcome matcher_oracle() {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  const auto make = [&](int n) {
    std::vector<Descriptor> out(static_cast<std::size_t>(n));
    for (Descriptor& d : out) {
      for (int k = 0; k < 64; ++k) d.components(k) = normal(rng);
      d.components.normalize();
      d.laplacian_sign = (rng() & 1) ? 1 : -1;
    }
    return out;
  };
  std::vector<Descriptor> query = make(200);
  const std::vector<Descriptor> target = make(200);
  // Half the queries are perturbed copies of targets so both branches of the
  // ratio test are exercised.
  for (std::size_t k = 0; k < 100; ++k) {
    Descriptor d = target[(k * 7) % 200];
    for (int c = 0; c < 64; ++c) d.components(c) += 0.08 * normal(rng);
    d.components.normalize();
    query[2 * k] = d;
  }
  const MatchConfig cfg;
  const auto serialize = [](const std::vector<Match>& ms) {
    std::ostringstream os;
    for (const Match& m : ms) {
      os << m.query_index << ' ' << m.target_index << ' ';
      os.write(reinterpret_cast<const char*>(&m.distance), sizeof(double));
      os << '\n';
    }
    return os.str();
  };
  const auto ours = match_descriptors(query, target, cfg);
  const auto oracle = t::brute_force_match(query, target, cfg);
  return {serialize(ours) == serialize(oracle),
          fmt("%zu matches vs %zu from brute force", ours.size(), oracle.size())};
}

Outcome ransac_recovery() {
  int successes = 0;
  std::string worst;
  int min_true = 1000;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(7000 + seed);
    std::normal_distribution<double> noise(0.0, 0.5);
    Eigen::Matrix3d truth;
    truth << uniform(rng, 0.8, 1.2), uniform(rng, -0.2, 0.2), uniform(rng, -50, 50),
             uniform(rng, -0.2, 0.2), uniform(rng, 0.8, 1.2), uniform(rng, -50, 50),
             uniform(rng, -2e-4, 2e-4), uniform(rng, -2e-4, 2e-4), 1.0;
    std::vector<Correspondence> pairs;
    for (int i = 0; i < 30; ++i) {
      const Eigen::Vector2d p(uniform(rng, 0, 640), uniform(rng, 0, 480));
      pairs.push_back({p, project_point(truth, p) + Eigen::Vector2d(noise(rng), noise(rng))});
    }
    for (int i = 0; i < 20; ++i) {
      pairs.push_back({{uniform(rng, 0, 640), uniform(rng, 0, 480)},
                       {uniform(rng, 0, 640), uniform(rng, 0, 480)}});
    }
    RansacConfig cfg;
    cfg.seed = seed;
    const VerificationResult r = ransac_verify(pairs, cfg);
    int true_inliers = 0;
    for (int i : r.inlier_indices) true_inliers += i < 30 ? 1 : 0;
    min_true = std::min(min_true, true_inliers);
    if (r.verified && true_inliers >= 28 && r.mean_reprojection_error < 1.0) ++successes;
  }
  return {successes >= 19,
          fmt("%d/20 seeds recovered (>= 19), fewest true inliers %d", successes, min_true)};
}

Outcome recognition_criterion() {
  const RecognitionStats s = end_to_end_recognition();
  return {s.correct == s.total && s.total == 5 && s.noise_unrecognized,
          fmt("top-1 %d/%d, ", s.correct, s.total) + s.detail};
}

Outcome determinism_criterion() {
  const RepeatabilityStats a = rotation_repeatability();
  const RepeatabilityStats b = rotation_repeatability();
  const RecognitionStats c = end_to_end_recognition();
  const RecognitionStats d = end_to_end_recognition();
  const bool features_same = a.json == b.json;
  const bool queries_same = c.json == d.json;
  return {features_same && queries_same,
          fmt("feature JSON %s (%zu bytes), query JSON %s (%zu bytes)",
              features_same ? "identical" : "DIFFERS", a.json.size(),
              queries_same ? "identical" : "DIFFERS", c.json.size())};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "integral-image exactness", 1.0, integral_exactness},
      {2, "response-map oracle equivalence", 10.0, response_oracle},
      {3, "blob / flood-fill equivalence", 1.0, blob_flood_fill},
      {4, "rotation repeatability", 5.0, rotation_criterion},
      {5, "photometric invariance", 0.0, photometric_criterion},
      {6, "matcher oracle equivalence", 0.0, matcher_oracle},
      {7, "RANSAC recovery", 2.0, ransac_recovery},
      {8, "end-to-end recognition", 30.0, recognition_criterion},
      {9, "determinism", 0.0, determinism_criterion},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit_s <= 0.0 || seconds < c.time_limit_s;
    const bool pass = outcome.pass && in_time;
    failures += pass ? 0 : 1;
    std::string timing = fmt("%.2f s", seconds);
    if (c.time_limit_s > 0.0) timing += fmt(" < %.0f s%s", c.time_limit_s, in_time ? "" : " EXCEEDED");
    std::printf("[%s] C%d %s: %s [%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                outcome.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
