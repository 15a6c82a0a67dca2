#include "arfex/blobs.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace arfex {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // Smaller root wins so the result does not depend on union order.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

BinaryMask binarize(const GrayImage& gray, int threshold, Polarity polarity) {
  if (threshold < 0 || threshold > 255) {
    throw Error(ErrorKind::InvalidArgument, "binarization threshold must be in [0,255]");
  }
  BinaryMask mask(gray.height(), gray.width());
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) {
      const bool bright = gray.level(x, y) >= threshold;
      mask(y, x) = (polarity == Polarity::White) == bright ? 1 : 0;
    }
  }
  return mask;
}

std::vector<LineBlob> detect_lineblobs(std::span<const std::uint8_t> row, int row_index,
                                       int first_label) {
  std::vector<LineBlob> runs;
  const int width = static_cast<int>(row.size());
  int x = 0;
  while (x < width) {
    if (row[static_cast<std::size_t>(x)] == 0) {
      ++x;
      continue;
    }
    const int start = x;
    while (x < width && row[static_cast<std::size_t>(x)] != 0) ++x;
    runs.push_back(LineBlob{row_index, start, x - 1,
                            first_label + static_cast<int>(runs.size())});
  }
  return runs;
}

std::vector<Blob> merge_lineblobs(std::span<const LineBlob> input, long min_pixels) {
  std::vector<LineBlob> runs(input.begin(), input.end());
  std::sort(runs.begin(), runs.end(), [](const LineBlob& a, const LineBlob& b) {
    return std::tie(a.row, a.x_start) < std::tie(b.row, b.x_start);
  });

  DisjointSets sets(runs.size());
  // Two-pointer sweep over each pair of consecutive rows.
  std::size_t prev_begin = 0;
  std::size_t cur_begin = 0;
  while (cur_begin < runs.size()) {
    std::size_t cur_end = cur_begin;
    while (cur_end < runs.size() && runs[cur_end].row == runs[cur_begin].row) ++cur_end;

    const bool adjacent = cur_begin > 0 && runs[prev_begin].row + 1 == runs[cur_begin].row;
    if (adjacent) {
      std::size_t p = prev_begin;
      std::size_t c = cur_begin;
      while (p < cur_begin && c < cur_end) {
        const LineBlob& above = runs[p];
        const LineBlob& here = runs[c];
        if (above.x_start <= here.x_end && here.x_start <= above.x_end) sets.unite(p, c);
        if (above.x_end < here.x_end) {
          ++p;
        } else {
          ++c;
        }
      }
    }
    prev_begin = cur_begin;
    cur_begin = cur_end;
  }

  std::vector<std::size_t> root_to_blob(runs.size(), runs.size());
  std::vector<Blob> blobs;
  std::vector<double> sum_x;
  std::vector<double> sum_y;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (root_to_blob[root] == runs.size()) {
      root_to_blob[root] = blobs.size();
      Blob blob;
      blob.x_min = runs[i].x_start;
      blob.x_max = runs[i].x_end;
      blob.y_min = blob.y_max = runs[i].row;
      blobs.push_back(std::move(blob));
      sum_x.push_back(0.0);
      sum_y.push_back(0.0);
    }
    const std::size_t k = root_to_blob[root];
    const LineBlob& run = runs[i];
    Blob& blob = blobs[k];
    const long length = run.length();
    blob.pixel_count += length;
    blob.x_min = std::min(blob.x_min, run.x_start);
    blob.x_max = std::max(blob.x_max, run.x_end);
    blob.y_min = std::min(blob.y_min, run.row);
    blob.y_max = std::max(blob.y_max, run.row);
    sum_x[k] += 0.5 * static_cast<double>(run.x_start + run.x_end) * static_cast<double>(length);
    sum_y[k] += static_cast<double>(run.row) * static_cast<double>(length);
    blob.member_runs.push_back(run);
  }

  for (std::size_t k = 0; k < blobs.size(); ++k) {
    blobs[k].centroid_x = sum_x[k] / static_cast<double>(blobs[k].pixel_count);
    blobs[k].centroid_y = sum_y[k] / static_cast<double>(blobs[k].pixel_count);
  }

  std::erase_if(blobs, [min_pixels](const Blob& b) { return b.pixel_count < min_pixels; });
  std::sort(blobs.begin(), blobs.end(), [](const Blob& a, const Blob& b) {
    if (a.pixel_count != b.pixel_count) return a.pixel_count > b.pixel_count;
    return std::tie(a.y_min, a.x_min) < std::tie(b.y_min, b.x_min);
  });
  return blobs;
}

std::vector<Blob> detect_blobs(const BinaryMask& mask, long min_pixels) {
  std::vector<LineBlob> runs;
  for (Eigen::Index y = 0; y < mask.rows(); ++y) {
    const std::span<const std::uint8_t> row(mask.data() + y * mask.cols(),
                                            static_cast<std::size_t>(mask.cols()));
    const auto row_runs = detect_lineblobs(row, static_cast<int>(y),
                                           static_cast<int>(runs.size()));
    runs.insert(runs.end(), row_runs.begin(), row_runs.end());
  }
  return merge_lineblobs(runs, min_pixels);
}

}  // namespace arfex
