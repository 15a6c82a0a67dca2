#ifndef ARFEX_BLOBS_HPP
#define ARFEX_BLOBS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "arfex/image.hpp"

namespace arfex {

enum class Polarity { White, Black };

/// 1 = foreground, 0 = background. Indexed (row, col) = (y, x).
using BinaryMask = RowMajorMatrix<std::uint8_t>;

/// White polarity: foreground iff level >= threshold. Black: iff level < threshold.
BinaryMask binarize(const GrayImage& gray, int threshold, Polarity polarity);

/// Maximal horizontal run of foreground pixels on one row.
struct LineBlob {
  int row = 0;
  int x_start = 0;
  int x_end = 0;  // inclusive
  int label = 0;

  int length() const noexcept { return x_end - x_start + 1; }
  friend bool operator==(const LineBlob&, const LineBlob&) = default;
};

struct Blob {
  long pixel_count = 0;
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  std::vector<LineBlob> member_runs;
};

/// Runs of non-zero entries in `row`, left to right. Labels start at
/// `first_label` and increase by one per run.
std::vector<LineBlob> detect_lineblobs(std::span<const std::uint8_t> row, int row_index,
                                       int first_label = 0);

/// Joins runs on adjacent rows that share at least one column (4-connectivity).
/// Input order does not matter. Blobs with fewer than `min_pixels` pixels are
/// dropped; the rest are sorted by descending size, then (y_min, x_min).
std::vector<Blob> merge_lineblobs(std::span<const LineBlob> runs, long min_pixels = 1);

/// Runs every row of `mask` through detect_lineblobs then merges.
std::vector<Blob> detect_blobs(const BinaryMask& mask, long min_pixels = 1);

}  // namespace arfex

#endif  // ARFEX_BLOBS_HPP
