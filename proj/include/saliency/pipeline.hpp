#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saliency/image.hpp"
#include "saliency/ranking_graph.hpp"
#include "saliency/superpixel.hpp"
#include "saliency/surroundedness.hpp"

namespace saliency {

enum class SaliencyStage { kForeground, kBackground, kCombined, kFinal };

struct SaliencyVector {
  std::vector<double> values;
  SaliencyStage stage = SaliencyStage::kForeground;
};

enum class SeedPolarity { kAsWritten, kInverted };

struct PipelineConfig {
  SlicParams slic;
  SurroundednessParams surroundedness;
  GraphParams graph;
  SeedPolarity background_seed_polarity = SeedPolarity::kAsWritten;
  SigmaCSource sigma_c_source = SigmaCSource::kEdgeDistances;
};

/// Throws ContractError naming the first field outside its valid range.
void validate(const PipelineConfig& cfg);

/// Strong seeds: S_p >= 2*mean; weak seeds: mean <= S_p < 2*mean.
/// Throws EmptySeedError when S_p is identically zero.
SeedSet foreground_seeds(std::span<const double> surroundedness);

/// Seed selection over border candidates from their distance to the mean
/// border color. `distances[k]` belongs to node `candidates[k]`; `n` is the
/// graph size.
SeedSet classify_border_distances(int n, std::span<const int> candidates,
                                  std::span<const double> distances, SeedPolarity polarity);

/// Background seeds among the border superpixels. Requires at least two
/// border superpixels.
SeedSet background_seeds(const Segmentation& seg, SeedPolarity polarity);

/// Ranks against the seeds and min-max normalizes; `complement` returns
/// 1 - normalized ranking.
SaliencyVector saliency_from_seeds(const AffinityGraph& g, const SeedSet& seeds, bool complement);

struct CombineResult {
  SaliencyVector map;
  SeedSet seeds;
  bool used_fallback = false;
  bool degenerate = false;  // no seeds at all: map is constant 0.5
};

/// Elements above the mean of either map become strong seeds of a second
/// ranking. `fallback_strong` (the strong foreground seeds) is used with the
/// strong background-salient elements when that selection is empty.
CombineResult combine_maps(const SaliencyVector& fg, const SaliencyVector& bg, const AffinityGraph& g,
                           std::span<const int> fallback_strong = {});

/// Geodesic smoothing: each output is the row-normalized
/// exp(-d^2 / (2 sigma_c^2)) weighted mean of the input, min-max normalized.
/// sigma_c == 0 leaves the (normalized) input unchanged.
SaliencyVector geodesic_refine(const SaliencyVector& s_com, const GeodesicField& field);

/// Every intermediate of one detection run.
struct Detection {
  Segmentation segmentation;
  GrayMap surroundedness;
  std::vector<double> surroundedness_per_superpixel;
  SaliencyVector foreground;
  SaliencyVector background;
  SaliencyVector combined;
  SaliencyVector final;
  GrayMap map;
  std::vector<std::string> warnings;
};

Detection detect_detailed(const RgbImage& img, const PipelineConfig& cfg);

/// Full detector: returns the final pixel-level saliency map.
GrayMap detect_full(const RgbImage& img, const PipelineConfig& cfg);

/// Min-max to [0,1]; constant input maps to zeros.
std::vector<double> min_max(std::span<const double> values);

}  // namespace saliency
