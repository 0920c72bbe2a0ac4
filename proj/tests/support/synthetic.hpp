#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "saliency/image.hpp"
#include "saliency/ranking_graph.hpp"
#include "saliency/superpixel.hpp"

namespace saliency::testing {

std::filesystem::path data_dir();
std::vector<std::filesystem::path> natural_images();

RgbImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Square of side `size` with its top-left corner at (x0, y0).
RgbImage square_on_background(int w, int h, int x0, int y0, int size, std::uint8_t fg, std::uint8_t bg);

/// `size` x `size` square centered in the image.
RgbImage centered_square(int w, int h, int size, std::uint8_t fg = 255, std::uint8_t bg = 0);

/// Smooth gradients, a few colored blobs and mild noise: something with
/// enough structure to exercise every stage.
RgbImage textured_scene(int w, int h, std::uint32_t seed);

RgbImage mirror_horizontally(const RgbImage& img);

/// Segmentation whose labels form a gx by gy grid of equal cells.
Segmentation grid_segmentation(const LabImage& img, int gx, int gy);

/// Random connected graph: a random spanning tree plus extra edges, random
/// LAB colors per node.
struct RandomGraph {
  std::vector<Lab> colors;
  std::vector<std::pair<int, int>> edges;
};
RandomGraph random_connected_graph(int n, double extra_edge_prob, std::mt19937& rng);

/// Self-deleting temporary directory.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& p);

/// Runs the CLI binary with the given arguments; returns the exit status.
int run_cli_binary(const std::string& args, std::string* captured = nullptr);

}  // namespace saliency::testing
