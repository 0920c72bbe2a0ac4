#include "saliency/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "saliency/error.hpp"
#include "saliency/imageio.hpp"

namespace saliency {
namespace {

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Slack for comparisons against a computed mean: the mean of n copies of c
// is not always exactly c, and constant maps must not select anything.
constexpr double kMeanSlack = 1e-12;

std::vector<int> above_mean(std::span<const double> v) {
  const double m = mean_of(v);
  std::vector<int> ids;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > m + kMeanSlack) ids.push_back(static_cast<int>(i));
  }
  return ids;
}

}  // namespace

std::vector<double> min_max(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  if (out.empty()) return out;
  const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
  const double a = *lo, b = *hi;
  if (!(b > a)) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  for (double& x : out) x = (x - a) / (b - a);
  return out;
}

void validate(const PipelineConfig& cfg) {
  if (cfg.slic.target_k < 2) throw ContractError("target_k must be >= 2");
  if (!(cfg.slic.compactness > 0.0)) throw ContractError("compactness must be > 0");
  if (cfg.slic.iterations < 1) throw ContractError("iterations must be >= 1");
  if (!(cfg.surroundedness.threshold_step > 0.0)) throw ContractError("threshold_step must be > 0");
  if (!(cfg.surroundedness.opening_radius >= 0.0)) throw ContractError("opening_radius must be >= 0");
  if (cfg.surroundedness.working_max_side < 0) throw ContractError("working_max_side must be >= 0");
  if (!(cfg.graph.sigma_sq > 0.0)) throw ContractError("sigma_sq must be > 0");
  if (!(cfg.graph.alpha > 0.0 && cfg.graph.alpha < 1.0)) throw ContractError("alpha must lie in (0,1)");
}

SeedSet foreground_seeds(std::span<const double> sp) {
  const double m = mean_of(sp);
  if (!(m > 0.0)) throw EmptySeedError("foreground seeds: surroundedness is identically zero");
  std::vector<int> strong, weak;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    if (sp[i] >= 2.0 * m - kMeanSlack) {
      strong.push_back(static_cast<int>(i));
    } else if (sp[i] >= m - kMeanSlack) {
      weak.push_back(static_cast<int>(i));
    }
  }
  return make_seed_set(static_cast<int>(sp.size()), std::move(strong), std::move(weak));
}

SeedSet classify_border_distances(int n, std::span<const int> candidates, std::span<const double> d,
                                  SeedPolarity polarity) {
  if (candidates.size() != d.size()) throw ContractError("candidate and distance counts differ");
  const double m = mean_of(d);
  std::vector<int> strong, weak;
  // Means of identical colors can differ in the last bits; treat that as zero spread.
  constexpr double kColorTolerance = 1e-9;
  if (!(m > kColorTolerance)) {
    // Every border color equals the mean border color.
    if (polarity == SeedPolarity::kAsWritten) {
      throw EmptySeedError("background seeds: border colors are identical");
    }
    strong.assign(candidates.begin(), candidates.end());
    return make_seed_set(n, std::move(strong), {});
  }
  for (std::size_t k = 0; k < d.size(); ++k) {
    const bool band = d[k] >= m && d[k] < 2.0 * m;
    const bool is_strong = polarity == SeedPolarity::kAsWritten ? d[k] >= 2.0 * m : d[k] < m;
    if (is_strong) {
      strong.push_back(candidates[k]);
    } else if (band) {
      weak.push_back(candidates[k]);
    }
  }
  return make_seed_set(n, std::move(strong), std::move(weak));
}

SeedSet background_seeds(const Segmentation& seg, SeedPolarity polarity) {
  const std::vector<int> border = border_superpixels(seg);
  if (border.size() < 2) throw ContractError("background seeds need at least two border superpixels");
  Lab mean{0, 0, 0};
  for (int i : border) {
    for (int c = 0; c < 3; ++c) mean[c] += seg.mean_lab[i][c];
  }
  for (double& c : mean) c /= static_cast<double>(border.size());
  std::vector<double> d;
  d.reserve(border.size());
  for (int i : border) {
    const Lab& p = seg.mean_lab[i];
    d.push_back(std::sqrt((p[0] - mean[0]) * (p[0] - mean[0]) + (p[1] - mean[1]) * (p[1] - mean[1]) +
                          (p[2] - mean[2]) * (p[2] - mean[2])));
  }
  return classify_border_distances(seg.count, border, d, polarity);
}

SaliencyVector saliency_from_seeds(const AffinityGraph& g, const SeedSet& seeds, bool complement) {
  SaliencyVector out;
  out.values = min_max(rank(g, seeds));
  if (complement) {
    for (double& v : out.values) v = 1.0 - v;
    out.stage = SaliencyStage::kBackground;
  } else {
    out.stage = SaliencyStage::kForeground;
  }
  return out;
}

CombineResult combine_maps(const SaliencyVector& fg, const SaliencyVector& bg, const AffinityGraph& g,
                           std::span<const int> fallback_strong) {
  if (fg.values.size() != bg.values.size() || static_cast<int>(fg.values.size()) != g.n) {
    throw ContractError("combine_maps: map lengths differ");
  }
  std::vector<int> ids = above_mean(fg.values);
  const std::vector<int> from_bg = above_mean(bg.values);
  ids.insert(ids.end(), from_bg.begin(), from_bg.end());

  CombineResult result;
  if (ids.empty()) {
    result.used_fallback = true;
    ids.assign(fallback_strong.begin(), fallback_strong.end());
    const double m = mean_of(bg.values);
    if (m > 0.0) {
      for (std::size_t i = 0; i < bg.values.size(); ++i) {
        if (bg.values[i] >= 2.0 * m - kMeanSlack) ids.push_back(static_cast<int>(i));
      }
    }
  }

  result.seeds = make_seed_set(g.n, std::move(ids), {});
  if (result.seeds.empty()) {
    result.degenerate = true;
    result.map.values.assign(g.n, 0.5);
  } else {
    result.map = saliency_from_seeds(g, result.seeds, false);
  }
  result.map.stage = SaliencyStage::kCombined;
  return result;
}

SaliencyVector geodesic_refine(const SaliencyVector& s_com, const GeodesicField& field) {
  const int n = static_cast<int>(s_com.values.size());
  if (field.dist.n != n) throw ContractError("geodesic_refine: field size differs from map length");
  SaliencyVector out;
  out.stage = SaliencyStage::kFinal;
  if (!(field.sigma_c > 0.0)) {
    out.values = min_max(s_com.values);
    return out;
  }
  const double denom = 2.0 * field.sigma_c * field.sigma_c;
  // Weighting offsets from the minimum keeps a constant input exactly constant.
  const double base = n > 0 ? *std::min_element(s_com.values.begin(), s_com.values.end()) : 0.0;
  std::vector<double> refined(n);
  for (int q = 0; q < n; ++q) {
    double wsum = 0.0, acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = field.dist(q, j);
      const double w = std::exp(-(d * d) / denom);
      wsum += w;
      acc += w * (s_com.values[j] - base);
    }
    refined[q] = acc / wsum;
  }
  out.values = min_max(refined);
  return out;
}

Detection detect_detailed(const RgbImage& img, const PipelineConfig& cfg) {
  validate(cfg);
  Detection det;
  const LabImage lab = rgb_to_lab(img);
  const long long pixels = static_cast<long long>(img.width) * img.height;

  SlicParams slic = cfg.slic;
  slic.target_k = static_cast<int>(std::min<long long>(slic.target_k, pixels));
  if (slic.target_k < 2) {
    det.warnings.push_back("image too small to segment; emitting a zero map");
    det.map = GrayMap(img.width, img.height, 0.0);
    return det;
  }
  det.segmentation = slic_segment(lab, slic);
  const Segmentation& seg = det.segmentation;
  const int n = seg.count;

  SurroundednessMap sm = pool_to_superpixels(surroundedness_pixel_map(lab, cfg.surroundedness), seg);
  det.surroundedness = std::move(sm.pixel);
  det.surroundedness_per_superpixel = std::move(sm.per_superpixel);

  const AffinityGraph graph = build_graph(seg, cfg.graph);

  std::optional<SaliencyVector> fg, bg;
  std::vector<int> fg_strong;
  try {
    const SeedSet seeds = foreground_seeds(det.surroundedness_per_superpixel);
    fg_strong = seeds.strong;
    fg = saliency_from_seeds(graph, seeds, false);
  } catch (const EmptySeedError& e) {
    det.warnings.push_back(e.what());
  }
  try {
    bg = saliency_from_seeds(graph, background_seeds(seg, cfg.background_seed_polarity), true);
  } catch (const EmptySeedError& e) {
    det.warnings.push_back(e.what());
  } catch (const ContractError& e) {
    det.warnings.push_back(e.what());
  }

  if (!fg && !bg) {
    det.warnings.push_back("no foreground or background seeds; emitting a zero map");
    const std::vector<double> zeros(n, 0.0);
    det.foreground = {zeros, SaliencyStage::kForeground};
    det.background = {zeros, SaliencyStage::kBackground};
    det.combined = {zeros, SaliencyStage::kCombined};
    det.final = {zeros, SaliencyStage::kFinal};
    det.map = render_map(det.final.values, seg);
    return det;
  }
  if (!fg) {
    det.warnings.push_back("foreground map replaced by background map");
    fg = SaliencyVector{bg->values, SaliencyStage::kForeground};
  }
  if (!bg) {
    det.warnings.push_back("background map replaced by foreground map");
    bg = SaliencyVector{fg->values, SaliencyStage::kBackground};
  }
  det.foreground = *fg;
  det.background = *bg;

  CombineResult combined = combine_maps(det.foreground, det.background, graph, fg_strong);
  if (combined.used_fallback) det.warnings.push_back("combination used the fallback seed set");
  if (combined.degenerate) det.warnings.push_back("combination found no seeds; map set to 0.5");
  det.combined = std::move(combined.map);

  det.final = geodesic_refine(det.combined, geodesic_distances(graph, cfg.sigma_c_source));
  det.map = render_map(det.final.values, seg);
  return det;
}

GrayMap detect_full(const RgbImage& img, const PipelineConfig& cfg) {
  return detect_detailed(img, cfg).map;
}

}  // namespace saliency
