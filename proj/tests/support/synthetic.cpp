#include "synthetic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>

#include <sys/wait.h>

#include "saliency/imageio.hpp"

namespace saliency::testing {

std::filesystem::path data_dir() { return SALIENCY_TEST_DATA_DIR; }

std::vector<std::filesystem::path> natural_images() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(data_dir())) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".png" || ext == ".jpg")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

RgbImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.set(x, y, r, g, b);
  }
  return img;
}

RgbImage square_on_background(int w, int h, int x0, int y0, int size, std::uint8_t fg, std::uint8_t bg) {
  RgbImage img = solid(w, h, bg, bg, bg);
  for (int y = y0; y < y0 + size; ++y) {
    for (int x = x0; x < x0 + size; ++x) img.set(x, y, fg, fg, fg);
  }
  return img;
}

RgbImage centered_square(int w, int h, int size, std::uint8_t fg, std::uint8_t bg) {
  return square_on_background(w, h, (w - size) / 2, (h - size) / 2, size, fg, bg);
}

RgbImage textured_scene(int w, int h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 6.0);

  struct Blob {
    double cx, cy, r;
    double color[3];
  };
  std::vector<Blob> blobs;
  const int count = 2 + static_cast<int>(u(rng) * 3);
  for (int i = 0; i < count; ++i) {
    Blob b{};
    b.cx = (0.25 + 0.5 * u(rng)) * w;
    b.cy = (0.25 + 0.5 * u(rng)) * h;
    b.r = (0.08 + 0.12 * u(rng)) * std::min(w, h);
    for (double& c : b.color) c = 255.0 * u(rng);
    blobs.push_back(b);
  }
  const double base[3] = {60 + 100 * u(rng), 60 + 100 * u(rng), 60 + 100 * u(rng)};

  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double c[3];
      for (int k = 0; k < 3; ++k) c[k] = base[k] + 30.0 * std::sin(0.02 * (x + 2 * k * y));
      for (const Blob& b : blobs) {
        if (std::hypot(x - b.cx, y - b.cy) < b.r) {
          for (int k = 0; k < 3; ++k) c[k] = b.color[k];
        }
      }
      std::uint8_t px[3];
      for (int k = 0; k < 3; ++k) px[k] = static_cast<std::uint8_t>(std::clamp(c[k] + noise(rng), 0.0, 255.0));
      img.set(x, y, px[0], px[1], px[2]);
    }
  }
  return img;
}

RgbImage mirror_horizontally(const RgbImage& img) {
  RgbImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t* p = img.pixel(img.width - 1 - x, y);
      out.set(x, y, p[0], p[1], p[2]);
    }
  }
  return out;
}

Segmentation grid_segmentation(const LabImage& img, int gx, int gy) {
  std::vector<int> labels(img.pixel_count());
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const int i = std::min(x * gx / img.width, gx - 1);
      const int j = std::min(y * gy / img.height, gy - 1);
      labels[static_cast<std::size_t>(y) * img.width + x] = j * gx + i;
    }
  }
  return segmentation_from_labels(img, std::move(labels));
}

RandomGraph random_connected_graph(int n, double extra_edge_prob, std::mt19937& rng) {
  RandomGraph g;
  std::uniform_real_distribution<double> L(0.0, 100.0), ab(-100.0, 100.0), u(0.0, 1.0);
  for (int i = 0; i < n; ++i) g.colors.push_back({L(rng), ab(rng), ab(rng)});
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    g.edges.push_back({order[pick(rng)], order[k]});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (u(rng) < extra_edge_prob) g.edges.push_back({i, j});
    }
  }
  return g;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("saliency_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli_binary(const std::string& args, std::string* captured) {
  const std::string cmd = std::string(SALIENCY_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::string text;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) text += buf;
  const int status = pclose(pipe);
  if (captured) *captured = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace saliency::testing
