#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace saliency {

/// Row-major 8-bit sRGB image, three bytes per pixel.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  RgbImage() = default;
  RgbImage(int w, int h);

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  std::uint8_t* pixel(int x, int y) { return &data[3 * (static_cast<std::size_t>(y) * width + x)]; }
  const std::uint8_t* pixel(int x, int y) const {
    return &data[3 * (static_cast<std::size_t>(y) * width + x)];
  }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

using Lab = std::array<double, 3>;

/// Row-major CIELAB image (L in [0,100], a/b roughly [-128,127]).
struct LabImage {
  int width = 0;
  int height = 0;
  std::vector<Lab> data;

  std::size_t pixel_count() const { return data.size(); }
  const Lab& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  Lab& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Row-major single channel map with values in [0,1].
struct GrayMap {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  GrayMap() = default;
  GrayMap(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 0 or 1

  BinaryMask() = default;
  BinaryMask(int w, int h, bool fill = false)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

  bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
  std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

}  // namespace saliency
