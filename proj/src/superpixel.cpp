#include "saliency/superpixel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "saliency/error.hpp"

namespace saliency {
namespace {

struct Center {
  double l, a, b, x, y;
};

double lab_dist_sq(const Lab& p, const Lab& q) {
  const double dl = p[0] - q[0], da = p[1] - q[1], db = p[2] - q[2];
  return dl * dl + da * da + db * db;
}

double gradient_at(const LabImage& img, int x, int y) {
  const int x0 = std::max(x - 1, 0), x1 = std::min(x + 1, img.width - 1);
  const int y0 = std::max(y - 1, 0), y1 = std::min(y + 1, img.height - 1);
  return lab_dist_sq(img.at(x1, y), img.at(x0, y)) + lab_dist_sq(img.at(x, y1), img.at(x, y0));
}

std::vector<Center> seed_centers(const LabImage& img, double step) {
  const int nx = std::max(1, static_cast<int>(std::lround(img.width / step)));
  const int ny = std::max(1, static_cast<int>(std::lround(img.height / step)));
  const double dx = static_cast<double>(img.width) / nx;
  const double dy = static_cast<double>(img.height) / ny;

  std::vector<Center> centers;
  centers.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int cx = std::min(static_cast<int>((i + 0.5) * dx), img.width - 1);
      int cy = std::min(static_cast<int>((j + 0.5) * dy), img.height - 1);

      // Move to the lowest-gradient position of the 3x3 neighborhood.
      int best_x = cx, best_y = cy;
      double best = gradient_at(img, cx, cy);
      for (int oy = -1; oy <= 1; ++oy) {
        for (int ox = -1; ox <= 1; ++ox) {
          const int px = cx + ox, py = cy + oy;
          if (px < 0 || py < 0 || px >= img.width || py >= img.height) continue;
          const double g = gradient_at(img, px, py);
          if (g < best) {
            best = g;
            best_x = px;
            best_y = py;
          }
        }
      }
      const Lab& c = img.at(best_x, best_y);
      centers.push_back({c[0], c[1], c[2], static_cast<double>(best_x), static_cast<double>(best_y)});
    }
  }
  return centers;
}

// Initial labels follow the seeding grid so every pixel is labeled even if a
// center's search window never reaches it.
std::vector<int> grid_labels(int width, int height, double step) {
  const int nx = std::max(1, static_cast<int>(std::lround(width / step)));
  const int ny = std::max(1, static_cast<int>(std::lround(height / step)));
  const double dx = static_cast<double>(width) / nx;
  const double dy = static_cast<double>(height) / ny;
  std::vector<int> labels(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const int j = std::min(static_cast<int>(y / dy), ny - 1);
    for (int x = 0; x < width; ++x) {
      const int i = std::min(static_cast<int>(x / dx), nx - 1);
      labels[static_cast<std::size_t>(y) * width + x] = j * nx + i;
    }
  }
  return labels;
}

void cluster(const LabImage& img, std::vector<Center>& centers, std::vector<int>& labels,
             double step, double compactness, int iterations) {
  const int w = img.width, h = img.height;
  const double spatial = (compactness / step) * (compactness / step);
  const int radius = static_cast<int>(std::ceil(step));
  std::vector<double> best(labels.size());

  for (int it = 0; it < iterations; ++it) {
    std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const Center& c = centers[k];
      const int x0 = std::max(static_cast<int>(c.x) - radius, 0);
      const int x1 = std::min(static_cast<int>(c.x) + radius, w - 1);
      const int y0 = std::max(static_cast<int>(c.y) - radius, 0);
      const int y1 = std::min(static_cast<int>(c.y) + radius, h - 1);
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const std::size_t idx = static_cast<std::size_t>(y) * w + x;
          const Lab& p = img.data[idx];
          const double dl = p[0] - c.l, da = p[1] - c.a, db = p[2] - c.b;
          const double ddx = x - c.x, ddy = y - c.y;
          const double d = dl * dl + da * da + db * db + spatial * (ddx * ddx + ddy * ddy);
          if (d < best[idx]) {
            best[idx] = d;
            labels[idx] = static_cast<int>(k);
          }
        }
      }
    }

    std::vector<Center> sum(centers.size(), Center{0, 0, 0, 0, 0});
    std::vector<int> n(centers.size(), 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t idx = static_cast<std::size_t>(y) * w + x;
        const int k = labels[idx];
        const Lab& p = img.data[idx];
        sum[k].l += p[0];
        sum[k].a += p[1];
        sum[k].b += p[2];
        sum[k].x += x;
        sum[k].y += y;
        ++n[k];
      }
    }
    for (std::size_t k = 0; k < centers.size(); ++k) {
      if (n[k] == 0) continue;
      const double inv = 1.0 / n[k];
      centers[k] = {sum[k].l * inv, sum[k].a * inv, sum[k].b * inv, sum[k].x * inv, sum[k].y * inv};
    }
  }
}

// Splits labels into 4-connected components. Returns the component id per
// pixel; components are numbered in raster order of their first pixel.
std::vector<int> connected_components(const std::vector<int>& labels, int width, int height,
                                      int& component_count) {
  std::vector<int> comp(labels.size(), -1);
  std::vector<std::size_t> stack;
  component_count = 0;
  for (std::size_t start = 0; start < labels.size(); ++start) {
    if (comp[start] >= 0) continue;
    const int id = component_count++;
    const int lab = labels[start];
    comp[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(idx % width), y = static_cast<int>(idx / width);
      const auto visit = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= width || ny >= height) return;
        const std::size_t n = static_cast<std::size_t>(ny) * width + nx;
        if (comp[n] < 0 && labels[n] == lab) {
          comp[n] = id;
          stack.push_back(n);
        }
      };
      visit(x - 1, y);
      visit(x + 1, y);
      visit(x, y - 1);
      visit(x, y + 1);
    }
  }
  return comp;
}

std::vector<int> enforce_connectivity(const std::vector<int>& labels, int width, int height,
                                      int label_count) {
  int ncomp = 0;
  const std::vector<int> comp = connected_components(labels, width, height, ncomp);

  std::vector<int> comp_label(ncomp, -1), comp_size(ncomp, 0);
  std::vector<std::vector<std::size_t>> comp_pixels(ncomp);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    comp_label[comp[i]] = labels[i];
    ++comp_size[comp[i]];
    comp_pixels[comp[i]].push_back(i);
  }

  // The largest component of each label keeps it (ties: first in raster order).
  std::vector<int> main_comp(label_count, -1);
  for (int c = 0; c < ncomp; ++c) {
    int& m = main_comp[comp_label[c]];
    if (m < 0 || comp_size[c] > comp_size[m]) m = c;
  }

  // final_of[c] = label the component ends up with, -1 while unresolved.
  std::vector<int> final_of(ncomp, -1);
  std::vector<int> label_size(label_count, 0);
  std::vector<int> orphans;
  for (int c = 0; c < ncomp; ++c) {
    if (main_comp[comp_label[c]] == c) {
      final_of[c] = comp_label[c];
      label_size[comp_label[c]] = comp_size[c];
    } else {
      orphans.push_back(c);
    }
  }

  while (!orphans.empty()) {
    std::vector<int> deferred;
    for (int c : orphans) {
      int best = -1;
      for (std::size_t idx : comp_pixels[c]) {
        const int x = static_cast<int>(idx % width), y = static_cast<int>(idx / width);
        const int nbrs[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
        for (const auto& nb : nbrs) {
          if (nb[0] < 0 || nb[1] < 0 || nb[0] >= width || nb[1] >= height) continue;
          const int nc = comp[static_cast<std::size_t>(nb[1]) * width + nb[0]];
          const int f = final_of[nc];
          if (nc == c || f < 0) continue;
          if (best < 0 || label_size[f] > label_size[best] ||
              (label_size[f] == label_size[best] && f < best)) {
            best = f;
          }
        }
      }
      if (best < 0) {
        deferred.push_back(c);
        continue;
      }
      final_of[c] = best;
      label_size[best] += comp_size[c];
    }
    if (deferred.size() == orphans.size()) break;  // unreachable on a connected grid
    orphans = std::move(deferred);
  }

  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = final_of[comp[i]];

  // Compact ids in raster order of first appearance.
  std::vector<int> remap(label_count, -1);
  int next = 0;
  for (int& l : out) {
    if (remap[l] < 0) remap[l] = next++;
    l = remap[l];
  }
  return out;
}

}  // namespace

Segmentation segmentation_from_labels(const LabImage& img, std::vector<int> labels) {
  if (labels.size() != img.pixel_count()) {
    throw ContractError("label map size does not match image");
  }
  Segmentation seg;
  seg.width = img.width;
  seg.height = img.height;
  int count = 0;
  for (int l : labels) {
    if (l < 0) throw ContractError("negative superpixel label");
    count = std::max(count, l + 1);
  }
  seg.count = count;
  seg.labels = std::move(labels);

  std::vector<std::array<double, 5>> sums(count, {0, 0, 0, 0, 0});
  seg.pixel_count.assign(count, 0);
  seg.is_border.assign(count, false);
  std::vector<std::vector<int>> adj(count);

  const int w = img.width, h = img.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      const int l = seg.labels[idx];
      const Lab& p = img.data[idx];
      auto& s = sums[l];
      s[0] += p[0];
      s[1] += p[1];
      s[2] += p[2];
      s[3] += x;
      s[4] += y;
      ++seg.pixel_count[l];
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) seg.is_border[l] = true;
      if (x + 1 < w) {
        const int r = seg.labels[idx + 1];
        if (r != l) {
          adj[l].push_back(r);
          adj[r].push_back(l);
        }
      }
      if (y + 1 < h) {
        const int d = seg.labels[idx + w];
        if (d != l) {
          adj[l].push_back(d);
          adj[d].push_back(l);
        }
      }
    }
  }

  seg.mean_lab.resize(count);
  seg.centroid.resize(count);
  for (int l = 0; l < count; ++l) {
    if (seg.pixel_count[l] == 0) {
      throw ContractError("superpixel label " + std::to_string(l) + " has no pixels");
    }
    const double inv = 1.0 / seg.pixel_count[l];
    seg.mean_lab[l] = {sums[l][0] * inv, sums[l][1] * inv, sums[l][2] * inv};
    seg.centroid[l] = {sums[l][3] * inv, sums[l][4] * inv};
    std::sort(adj[l].begin(), adj[l].end());
    adj[l].erase(std::unique(adj[l].begin(), adj[l].end()), adj[l].end());
  }
  seg.adjacency = std::move(adj);
  return seg;
}

Segmentation slic_segment(const LabImage& img, const SlicParams& params) {
  const long long pixels = static_cast<long long>(img.width) * img.height;
  if (img.width < 1 || img.height < 1 || img.pixel_count() != static_cast<std::size_t>(pixels)) {
    throw ContractError("slic_segment: invalid image");
  }
  if (params.target_k < 2 || params.target_k > pixels) {
    throw ContractError("slic_segment: target_k must lie in [2, width*height], got " +
                        std::to_string(params.target_k));
  }
  if (params.iterations < 1) throw ContractError("slic_segment: iterations must be >= 1");
  if (!(params.compactness > 0.0)) throw ContractError("slic_segment: compactness must be > 0");

  const double step = std::sqrt(static_cast<double>(pixels) / params.target_k);
  std::vector<Center> centers = seed_centers(img, step);
  std::vector<int> labels = grid_labels(img.width, img.height, step);
  cluster(img, centers, labels, step, params.compactness, params.iterations);

  labels = enforce_connectivity(labels, img.width, img.height, static_cast<int>(centers.size()));
  Segmentation seg = segmentation_from_labels(img, std::move(labels));
  if (seg.count < 2) {
    throw ContractError("slic_segment: segmentation collapsed to a single superpixel");
  }
  return seg;
}

std::vector<int> border_superpixels(const Segmentation& seg) {
  std::vector<int> ids;
  for (int i = 0; i < seg.count; ++i) {
    if (seg.is_border[i]) ids.push_back(i);
  }
  return ids;
}

}  // namespace saliency
