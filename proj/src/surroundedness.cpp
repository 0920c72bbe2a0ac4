#include "saliency/surroundedness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saliency/error.hpp"

namespace saliency {
namespace {

struct Box {
  int x0, y0, x1, y1;  // inclusive; empty when x1 < x0
  bool empty() const { return x1 < x0 || y1 < y0; }
};

std::vector<int> disk_half_widths(int radius) {
  std::vector<int> w(2 * radius + 1);
  for (int dy = -radius; dy <= radius; ++dy) {
    w[dy + radius] = static_cast<int>(std::floor(std::sqrt(double(radius * radius - dy * dy))));
  }
  return w;
}

Box bounding_box(const std::vector<std::uint8_t>& mask, int width, int height) {
  Box b{width, height, -1, -1};
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* row = &mask[static_cast<std::size_t>(y) * width];
    for (int x = 0; x < width; ++x) {
      if (row[x]) {
        b.x0 = std::min(b.x0, x);
        b.x1 = std::max(b.x1, x);
        b.y0 = std::min(b.y0, y);
        b.y1 = std::max(b.y1, y);
      }
    }
  }
  return b;
}

// Erosion then dilation with a disk; pixels outside the image count as 0.
// Work is restricted to the bounding box of the foreground.
void open_in_place(std::vector<std::uint8_t>& mask, int width, int height, int radius) {
  if (radius <= 0) return;
  const Box box = bounding_box(mask, width, height);
  if (box.empty()) return;
  const std::vector<int> half = disk_half_widths(radius);
  const int bw = box.x1 - box.x0 + 1;
  const int bh = box.y1 - box.y0 + 1;

  // Horizontal run lengths of ones ending at / starting at each pixel.
  std::vector<int> left(static_cast<std::size_t>(bw) * bh), right(left.size());
  for (int r = 0; r < bh; ++r) {
    const std::uint8_t* row = &mask[static_cast<std::size_t>(box.y0 + r) * width + box.x0];
    int* L = &left[static_cast<std::size_t>(r) * bw];
    int* R = &right[static_cast<std::size_t>(r) * bw];
    int run = 0;
    for (int i = 0; i < bw; ++i) L[i] = run = row[i] ? run + 1 : 0;
    run = 0;
    for (int i = bw - 1; i >= 0; --i) R[i] = run = row[i] ? run + 1 : 0;
  }

  std::vector<std::uint8_t> eroded(static_cast<std::size_t>(bw) * bh, 0);
  bool any = false;
  for (int r = 0; r < bh; ++r) {
    for (int i = 0; i < bw; ++i) {
      bool keep = true;
      for (int dy = -radius; dy <= radius && keep; ++dy) {
        const int rr = r + dy;
        if (rr < 0 || rr >= bh) {
          keep = false;
          break;
        }
        const std::size_t k = static_cast<std::size_t>(rr) * bw + i;
        const int w = half[dy + radius];
        keep = left[k] > w && right[k] > w;
      }
      if (keep) {
        eroded[static_cast<std::size_t>(r) * bw + i] = 1;
        any = true;
      }
    }
  }

  const std::size_t y_begin = static_cast<std::size_t>(box.y0) * width;
  const std::size_t y_end = static_cast<std::size_t>(box.y1 + 1) * width;
  std::fill(mask.begin() + y_begin, mask.begin() + y_end, 0);
  if (!any) return;

  // Horizontal distance to the nearest eroded pixel in each box row.
  constexpr int kFar = std::numeric_limits<int>::max() / 2;
  std::vector<int> nearest(static_cast<std::size_t>(bw) * bh);
  for (int r = 0; r < bh; ++r) {
    const std::uint8_t* row = &eroded[static_cast<std::size_t>(r) * bw];
    int* N = &nearest[static_cast<std::size_t>(r) * bw];
    int last = -kFar;
    for (int i = 0; i < bw; ++i) {
      if (row[i]) last = i;
      N[i] = i - last;
    }
    last = kFar;
    for (int i = bw - 1; i >= 0; --i) {
      if (row[i]) last = i;
      N[i] = std::min(N[i], last - i);
    }
  }

  // Dilation can only reach pixels within the box (eroded set shrank by radius).
  for (int r = 0; r < bh; ++r) {
    std::uint8_t* out = &mask[static_cast<std::size_t>(box.y0 + r) * width + box.x0];
    for (int i = 0; i < bw; ++i) {
      for (int dy = -radius; dy <= radius; ++dy) {
        const int rr = r + dy;
        if (rr < 0 || rr >= bh) continue;
        if (nearest[static_cast<std::size_t>(rr) * bw + i] <= half[dy + radius]) {
          out[i] = 1;
          break;
        }
      }
    }
  }
}

// Marks every pixel 8-connected (through equal values) to the image border.
void flood_from_border(const std::vector<std::uint8_t>& bm, int width, int height,
                       std::vector<std::uint8_t>& reached, std::vector<std::size_t>& stack) {
  std::fill(reached.begin(), reached.end(), 0);
  stack.clear();
  const auto seed = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * width + x;
    if (!reached[i]) {
      reached[i] = 1;
      stack.push_back(i);
    }
  };
  for (int x = 0; x < width; ++x) {
    seed(x, 0);
    seed(x, height - 1);
  }
  for (int y = 0; y < height; ++y) {
    seed(0, y);
    seed(width - 1, y);
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % width), y = static_cast<int>(i / width);
    const std::uint8_t v = bm[i];
    for (int dy = -1; dy <= 1; ++dy) {
      const int ny = y + dy;
      if (ny < 0 || ny >= height) continue;
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx;
        if (nx < 0 || nx >= width) continue;
        const std::size_t n = static_cast<std::size_t>(ny) * width + nx;
        if (!reached[n] && bm[n] == v) {
          reached[n] = 1;
          stack.push_back(n);
        }
      }
    }
  }
}

std::vector<double> rescaled_channel(const LabImage& img, int c) {
  std::vector<double> out(img.pixel_count());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Lab& p : img.data) {
    lo = std::min(lo, p[c]);
    hi = std::max(hi, p[c]);
  }
  const double range = hi - lo;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = range > 0.0 ? (img.data[i][c] - lo) / range * 255.0 : 0.0;
  }
  return out;
}

void min_max_normalize(std::vector<double>& v) {
  if (v.empty()) return;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double a = *lo, b = *hi;
  if (!(b > a)) {
    std::fill(v.begin(), v.end(), 0.0);
    return;
  }
  for (double& x : v) x = (x - a) / (b - a);
}

double sample(const std::vector<double>& src, int sw, int sh, double sx, double sy) {
  sx = std::clamp(sx, 0.0, double(sw - 1));
  sy = std::clamp(sy, 0.0, double(sh - 1));
  const int x0 = static_cast<int>(sx), y0 = static_cast<int>(sy);
  const int x1 = std::min(x0 + 1, sw - 1), y1 = std::min(y0 + 1, sh - 1);
  const double fx = sx - x0, fy = sy - y0;
  const auto at = [&](int x, int y) { return src[static_cast<std::size_t>(y) * sw + x]; };
  const double top = at(x0, y0) * (1 - fx) + at(x1, y0) * fx;
  const double bot = at(x0, y1) * (1 - fx) + at(x1, y1) * fx;
  return top * (1 - fy) + bot * fy;
}

std::vector<double> resize_plane(const std::vector<double>& src, int sw, int sh, int dw, int dh) {
  std::vector<double> out(static_cast<std::size_t>(dw) * dh);
  const double kx = double(sw) / dw, ky = double(sh) / dh;
  for (int y = 0; y < dh; ++y) {
    const double sy = (y + 0.5) * ky - 0.5;
    for (int x = 0; x < dw; ++x) {
      out[static_cast<std::size_t>(y) * dw + x] = sample(src, sw, sh, (x + 0.5) * kx - 0.5, sy);
    }
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> open_binary(const std::vector<std::uint8_t>& mask, int width, int height,
                                      int radius) {
  std::vector<std::uint8_t> out = mask;
  open_in_place(out, width, height, radius);
  return out;
}

LabImage resize_bilinear(const LabImage& img, int width, int height) {
  LabImage out;
  out.width = width;
  out.height = height;
  out.data.resize(static_cast<std::size_t>(width) * height);
  for (int c = 0; c < 3; ++c) {
    std::vector<double> plane(img.pixel_count());
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = img.data[i][c];
    const std::vector<double> r = resize_plane(plane, img.width, img.height, width, height);
    for (std::size_t i = 0; i < r.size(); ++i) out.data[i][c] = r[i];
  }
  return out;
}

GrayMap resize_bilinear(const GrayMap& map, int width, int height) {
  GrayMap out;
  out.width = width;
  out.height = height;
  out.data = resize_plane(map.data, map.width, map.height, width, height);
  return out;
}

GrayMap bms_pixel_map(const LabImage& img, double threshold_step, int opening_radius) {
  if (!(threshold_step > 0.0)) throw ContractError("bms_pixel_map: threshold_step must be > 0");
  const int w = img.width, h = img.height;
  const std::size_t n = img.pixel_count();

  // Integer accumulation keeps the sum independent of evaluation order.
  std::vector<std::uint32_t> hits(n, 0);
  std::uint32_t maps = 0;
  std::vector<std::uint8_t> bm(n), reached(n), att(n);
  std::vector<std::size_t> stack;

  for (int c = 0; c < 3; ++c) {
    const std::vector<double> channel = rescaled_channel(img, c);
    for (int k = 0;; ++k) {
      const double theta = k * threshold_step;
      if (theta > 255.0) break;
      for (std::size_t i = 0; i < n; ++i) bm[i] = channel[i] > theta ? 1 : 0;
      flood_from_border(bm, w, h, reached, stack);
      for (std::uint8_t polarity : {std::uint8_t{1}, std::uint8_t{0}}) {
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
          att[i] = (!reached[i] && bm[i] == polarity) ? 1 : 0;
          any = any || att[i];
        }
        ++maps;
        if (!any) continue;
        open_in_place(att, w, h, opening_radius);
        for (std::size_t i = 0; i < n; ++i) hits[i] += att[i];
      }
    }
  }

  GrayMap out(w, h);
  for (std::size_t i = 0; i < n; ++i) out.data[i] = static_cast<double>(hits[i]) / maps;
  min_max_normalize(out.data);
  return out;
}

GrayMap surroundedness_pixel_map(const LabImage& img, const SurroundednessParams& params) {
  const int longest = std::max(img.width, img.height);
  int ww = img.width, wh = img.height;
  const bool downscale = params.working_max_side > 0 && longest > params.working_max_side;
  if (downscale) {
    const double scale = double(params.working_max_side) / longest;
    ww = std::max(1, static_cast<int>(std::lround(img.width * scale)));
    wh = std::max(1, static_cast<int>(std::lround(img.height * scale)));
  }
  const double diag = std::hypot(double(ww), double(wh));
  const int radius = static_cast<int>(std::lround(params.opening_radius * diag / 500.0));

  if (!downscale) return bms_pixel_map(img, params.threshold_step, radius);

  const GrayMap small = bms_pixel_map(resize_bilinear(img, ww, wh), params.threshold_step, radius);
  GrayMap full = resize_bilinear(small, img.width, img.height);
  for (double& v : full.data) v = std::clamp(v, 0.0, 1.0);
  return full;
}

SurroundednessMap pool_to_superpixels(GrayMap pixel_map, const Segmentation& seg) {
  if (pixel_map.width != seg.width || pixel_map.height != seg.height ||
      pixel_map.data.size() != seg.labels.size()) {
    throw ContractError("pool_to_superpixels: map and segmentation dimensions differ");
  }
  std::vector<double> sum(seg.count, 0.0);
  for (std::size_t i = 0; i < seg.labels.size(); ++i) sum[seg.labels[i]] += pixel_map.data[i];
  SurroundednessMap out;
  out.per_superpixel.resize(seg.count);
  for (int l = 0; l < seg.count; ++l) out.per_superpixel[l] = sum[l] / seg.pixel_count[l];
  out.pixel = std::move(pixel_map);
  return out;
}

}  // namespace saliency
