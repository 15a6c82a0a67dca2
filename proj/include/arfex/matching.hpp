#ifndef ARFEX_MATCHING_HPP
#define ARFEX_MATCHING_HPP

#include <span>
#include <vector>

#include "arfex/features.hpp"

namespace arfex {

struct Match {
  int query_index = 0;
  int target_index = 0;
  double distance = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

struct MatchConfig {
  /// Accept iff nearest / second-nearest < ratio_threshold. Must lie in (0, 1].
  double ratio_threshold = 0.7;
  /// Only compare descriptors whose Laplacian signs agree.
  bool use_sign_filter = true;
  /// Distance bound used when a query has exactly one candidate.
  double single_candidate_distance = 0.5;
};

void validate(const MatchConfig& config);

/// Euclidean distance between descriptor components.
double distance(const Descriptor& a, const Descriptor& b);

/// Exhaustive nearest-neighbour matching from `query` into `target`. At most
/// one match per query; sorted by distance, then (query_index, target_index).
std::vector<Match> match_descriptors(std::span<const Descriptor> query,
                                     std::span<const Descriptor> target,
                                     const MatchConfig& config = {});

}  // namespace arfex

#endif  // ARFEX_MATCHING_HPP
