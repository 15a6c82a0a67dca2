// arfex: feature extraction, blob detection and object recognition from the
// command line. JSON goes to --output; diagnostics go to stderr.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include "arfex/arfex.hpp"

namespace {

namespace fs = std::filesystem;
using namespace arfex;

enum ExitCode : int {
  kSuccess = 0,
  kUnrecognized = 1,
  kIoOrUsage = 2,
  kInvalidImage = 3,
  kDatabaseConstraint = 4,
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IoError:
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
      return kIoOrUsage;
    case ErrorKind::InvalidImage:
    case ErrorKind::ImageTooSmall:
    case ErrorKind::NoFeatures:
      return kInvalidImage;
    case ErrorKind::DuplicateId:
    case ErrorKind::VersionMismatch:
      return kDatabaseConstraint;
    default:
      return kInvalidImage;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
}

std::string resolve_info(const std::string& info) {
  if (info.empty() || info.front() != '@') return info;
  const fs::path path = info.substr(1);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open info file " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct ExtractOptions {
  std::string input;
  std::string output;
  std::string overlay;
  ExtractionConfig config;
};

struct BlobOptions {
  std::string input;
  std::string output;
  int threshold = 128;
  std::string polarity = "white";
  long min_pixels = 1;
};

struct IndexOptions {
  std::string db;
  std::string input;
  std::string id;
  std::string name;
  std::string info;
};

struct QueryOptions {
  std::string db;
  std::string input;
  std::string output;
  std::string annotate;
  std::uint64_t seed = 0;
  double ratio = 0.7;
};

void add_extraction_flags(CLI::App* cmd, ExtractionConfig& config) {
  cmd->add_option("--threshold", config.threshold, "Hessian response threshold")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--octaves", config.octaves, "Number of octaves")->check(CLI::Range(1, 4));
  cmd->add_flag("--upright", config.upright, "Skip orientation assignment");
}

int run_extract(const ExtractOptions& opts) {
  const RasterImage img = read_image(opts.input);
  const Features features = extract_features(img, opts.config);
  write_text(opts.output, to_text(features_to_json(features, opts.config)));
  if (!opts.overlay.empty()) write_ppm(opts.overlay, keypoint_overlay(img, features.points));
  std::cerr << "extract: " << features.points.size() << " interest points\n";
  return kSuccess;
}

int run_annotate(const ExtractOptions& opts) {
  const RasterImage img = read_image(opts.input);
  const Features features = extract_features(img, opts.config);
  write_ppm(opts.output, keypoint_overlay(img, features.points));
  std::cerr << "annotate: " << features.points.size() << " interest points\n";
  return kSuccess;
}

int run_blobs(const BlobOptions& opts) {
  const RasterImage img = read_image(opts.input);
  const Polarity polarity = opts.polarity == "black" ? Polarity::Black : Polarity::White;
  const auto blobs = detect_blobs(binarize(to_grayscale(img), opts.threshold, polarity),
                                  opts.min_pixels);
  write_text(opts.output, blobs_to_json(blobs, opts.threshold, polarity).dump(2) + "\n");
  std::cerr << "blobs: " << blobs.size() << " blobs\n";
  return kSuccess;
}

int run_index(const IndexOptions& opts) {
  Database db = fs::exists(opts.db) ? load_db(opts.db) : Database{};
  const RasterImage img = read_image(opts.input);
  db = index_image(std::move(db), img, opts.id, opts.name, resolve_info(opts.info));
  save_db(db, opts.db);
  std::cerr << "index: '" << opts.id << "' stored with " << db.records.back().keypoints.size()
            << " features, database holds " << db.records.size() << " objects\n";
  return kSuccess;
}

int run_query(const QueryOptions& opts) {
  const Database db = load_db(opts.db);
  const RasterImage img = read_image(opts.input);
  QueryConfig config;
  config.ransac.seed = opts.seed;
  config.match.ratio_threshold = opts.ratio;
  const QueryResult result = query_image(db, img, config);
  write_text(opts.output, query_result_to_json(result).dump(2) + "\n");

  if (!opts.annotate.empty()) {
    RasterImage overlay = img;
    if (result.recognized()) {
      const Candidate& top = result.ranked.front();
      for (int i : top.verification.inlier_indices) {
        const Match& m = top.matches[static_cast<std::size_t>(i)];
        draw_keypoint(overlay, result.query_features.points[static_cast<std::size_t>(m.query_index)]);
      }
      if (result.frame) draw_polygon(overlay, *result.frame);
    }
    write_ppm(opts.annotate, overlay);
  }

  std::cerr << "query: " << result.best << "\n";
  return result.recognized() ? kSuccess : kUnrecognized;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arfex: local-feature extraction and object recognition"};
  app.require_subcommand(1);

  ExtractOptions extract_opts;
  auto* extract = app.add_subcommand("extract", "Extract interest points and descriptors");
  extract->add_option("--input", extract_opts.input, "Input image (PPM or PNG)")->required();
  extract->add_option("--output", extract_opts.output, "Output JSON")->required();
  extract->add_option("--overlay", extract_opts.overlay, "Keypoint overlay (PPM)");
  add_extraction_flags(extract, extract_opts.config);

  ExtractOptions annotate_opts;
  auto* annotate = app.add_subcommand("annotate", "Draw detected keypoints onto the image");
  annotate->add_option("--input", annotate_opts.input, "Input image (PPM or PNG)")->required();
  annotate->add_option("--output", annotate_opts.output, "Output image (PPM)")->required();
  add_extraction_flags(annotate, annotate_opts.config);

  BlobOptions blob_opts;
  auto* blobs = app.add_subcommand("blobs", "Detect scanline blobs in a binarized image");
  blobs->add_option("--input", blob_opts.input, "Input image (PPM or PNG)")->required();
  blobs->add_option("--output", blob_opts.output, "Output JSON")->required();
  blobs->add_option("--threshold", blob_opts.threshold, "Binarization level")
      ->check(CLI::Range(0, 255));
  blobs->add_option("--polarity", blob_opts.polarity, "Foreground polarity")
      ->check(CLI::IsMember({"white", "black"}));
  blobs->add_option("--min-pixels", blob_opts.min_pixels, "Smallest blob kept")
      ->check(CLI::PositiveNumber);

  IndexOptions index_opts;
  auto* index = app.add_subcommand("index", "Add an object image to a database");
  index->add_option("--db", index_opts.db, "Database JSON (created if absent)")->required();
  index->add_option("--input", index_opts.input, "Object image (PPM or PNG)")->required();
  index->add_option("--id", index_opts.id, "Unique object id")->required();
  index->add_option("--name", index_opts.name, "Display name")->required();
  index->add_option("--info", index_opts.info, "Associated text, or @file")->required();

  QueryOptions query_opts;
  auto* query = app.add_subcommand("query", "Recognize an image against a database");
  query->add_option("--db", query_opts.db, "Database JSON")->required();
  query->add_option("--input", query_opts.input, "Query image (PPM or PNG)")->required();
  query->add_option("--output", query_opts.output, "Query result JSON")->required();
  query->add_option("--annotate", query_opts.annotate, "Recognition overlay (PPM)");
  query->add_option("--seed", query_opts.seed, "RANSAC seed")->envname("ARFEX_SEED");
  query->add_option("--ratio", query_opts.ratio, "Nearest-neighbour ratio threshold")
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIoOrUsage;
  }

  try {
    if (*extract) return run_extract(extract_opts);
    if (*annotate) return run_annotate(annotate_opts);
    if (*blobs) return run_blobs(blob_opts);
    if (*index) return run_index(index_opts);
    if (*query) return run_query(query_opts);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoOrUsage;
  }
  return kIoOrUsage;
}
