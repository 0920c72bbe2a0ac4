#pragma once

#include <vector>

#include "saliency/image.hpp"

namespace saliency {

struct SlicParams {
  int target_k = 200;
  double compactness = 10.0;
  int iterations = 10;
};

/// Superpixel partition of an image plus the per-region statistics the
/// ranking stages consume.
struct Segmentation {
  int width = 0;
  int height = 0;
  std::vector<int> labels;  // row-major, values in [0, count)
  int count = 0;
  std::vector<Lab> mean_lab;
  std::vector<std::array<double, 2>> centroid;  // (x, y)
  std::vector<int> pixel_count;
  std::vector<bool> is_border;
  std::vector<std::vector<int>> adjacency;  // sorted, symmetric, no self loops

  int label(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

/// SLIC clustering in CIELAB + xy. Orphan fragments are merged into their
/// largest 4-adjacent superpixel (ties to the lowest id) so every region is
/// 4-connected; ids are compacted in raster order of first appearance.
/// Throws ContractError when target_k is outside [2, width*height] or
/// iterations < 1.
Segmentation slic_segment(const LabImage& img, const SlicParams& params);

/// Builds a Segmentation (statistics, border flags, adjacency) from an
/// arbitrary label map. Labels must cover [0, count) with no gaps.
Segmentation segmentation_from_labels(const LabImage& img, std::vector<int> labels);

/// Ids of superpixels touching row 0, row H-1, column 0 or column W-1.
std::vector<int> border_superpixels(const Segmentation& seg);

}  // namespace saliency
