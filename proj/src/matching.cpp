#include "arfex/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace arfex {

void validate(const MatchConfig& config) {
  if (!(config.ratio_threshold > 0.0 && config.ratio_threshold <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "ratio threshold must be in (0,1]");
  }
  if (!(config.single_candidate_distance >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "single-candidate distance must be >= 0");
  }
}

double distance(const Descriptor& a, const Descriptor& b) {
  // Plain left-to-right accumulation keeps results identical across builds.
  double sum = 0.0;
  for (int k = 0; k < params::kDescriptorLength; ++k) {
    const double d = a.components(k) - b.components(k);
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::vector<Match> match_descriptors(std::span<const Descriptor> query,
                                     std::span<const Descriptor> target,
                                     const MatchConfig& config) {
  validate(config);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<Match> matches;
  for (std::size_t q = 0; q < query.size(); ++q) {
    double best = kInf;
    double second = kInf;
    int best_index = -1;
    int candidates = 0;
    for (std::size_t t = 0; t < target.size(); ++t) {
      if (config.use_sign_filter && query[q].laplacian_sign != target[t].laplacian_sign) {
        continue;
      }
      ++candidates;
      const double d = distance(query[q], target[t]);
      if (d < best) {
        second = best;
        best = d;
        best_index = static_cast<int>(t);
      } else if (d < second) {
        second = d;
      }
    }

    bool accept = false;
    if (candidates == 1) {
      accept = best < config.single_candidate_distance;
    } else if (candidates > 1 && second > 0.0) {
      accept = best / second < config.ratio_threshold;
    }
    if (accept) matches.push_back(Match{static_cast<int>(q), best_index, best});
  }

  std::sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) {
    return std::tie(a.distance, a.query_index, a.target_index) <
           std::tie(b.distance, b.query_index, b.target_index);
  });
  return matches;
}

}  // namespace arfex
