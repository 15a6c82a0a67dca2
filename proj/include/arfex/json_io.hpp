#ifndef ARFEX_JSON_IO_HPP
#define ARFEX_JSON_IO_HPP

#include <json.hpp>

#include <span>
#include <string>

#include "arfex/blobs.hpp"
#include "arfex/database.hpp"
#include "arfex/features.hpp"

namespace arfex {

using Json = nlohmann::ordered_json;

/// Variable settings plus the fixed detector/descriptor parameters.
Json config_to_json(const ExtractionConfig& config);
/// Reads the variable settings; the fixed parameters are informational.
ExtractionConfig config_from_json(const Json& j);

Json point_to_json(const InterestPoint& ip);
InterestPoint point_from_json(const Json& j);

/// {"config": ..., "points": [...], "descriptors": [[64 reals], ...]}
Json features_to_json(const Features& features, const ExtractionConfig& config);

/// {"threshold": .., "polarity": "white", "blobs": [{"count", "bbox", "centroid"}]}
Json blobs_to_json(std::span<const Blob> blobs, int threshold, Polarity polarity);

Json query_result_to_json(const QueryResult& result);

Json database_to_json(const Database& db);
/// Throws ParseError on schema violations and VersionMismatch on a foreign version.
Database database_from_json(const Json& j);

/// Compact single-line rendering followed by a newline.
std::string to_text(const Json& j);

}  // namespace arfex

#endif  // ARFEX_JSON_IO_HPP
