#pragma once

#include <vector>

#include "saliency/image.hpp"
#include "saliency/superpixel.hpp"

namespace saliency {

struct SurroundednessParams {
  double threshold_step = 8.0;
  /// Opening radius in pixels at the 400x300 reference scale; scaled by the
  /// working image diagonal over 500.
  double opening_radius = 3.0;
  /// Longest side of the image the Boolean maps are computed on. Larger
  /// inputs are downscaled and the result is upsampled bilinearly.
  int working_max_side = 400;
};

struct SurroundednessMap {
  GrayMap pixel;                      // pixel-level surroundedness
  std::vector<double> per_superpixel;  // mean of `pixel` inside each superpixel
};

/// Boolean-map surroundedness. Every LAB channel is min-max rescaled to
/// [0,255] and thresholded at 0, step, 2*step, ... <= 255; each Boolean map
/// and its complement lose all 8-connected components touching the image
/// border, the survivors are opened with a disk of `opening_radius` pixels,
/// and the mean of all those attention maps is min-max normalized.
/// Requires threshold_step > 0.
GrayMap bms_pixel_map(const LabImage& img, double threshold_step, int opening_radius);

/// Runs bms_pixel_map at the working resolution and brings the result back
/// to the input size.
GrayMap surroundedness_pixel_map(const LabImage& img, const SurroundednessParams& params);

/// Mean of `pixel_map` over every superpixel. Throws ContractError on a
/// dimension mismatch.
SurroundednessMap pool_to_superpixels(GrayMap pixel_map, const Segmentation& seg);

// Exposed for tests.
std::vector<std::uint8_t> open_binary(const std::vector<std::uint8_t>& mask, int width, int height,
                                      int radius);
LabImage resize_bilinear(const LabImage& img, int width, int height);
GrayMap resize_bilinear(const GrayMap& map, int width, int height);

}  // namespace saliency
