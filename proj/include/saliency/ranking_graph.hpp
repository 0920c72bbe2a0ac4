#pragma once

#include <span>
#include <vector>

#include "saliency/superpixel.hpp"

namespace saliency {

/// Row-major dense square matrix.
struct DenseMatrix {
  int n = 0;
  std::vector<double> values;

  DenseMatrix() = default;
  explicit DenseMatrix(int size, double fill = 0.0)
      : n(size), values(static_cast<std::size_t>(size) * size, fill) {}

  double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
  double& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * n + j]; }
};

enum class AffinityExponent { kNorm, kNormSquared };

struct GraphParams {
  double sigma_sq = 0.1;
  double alpha = 0.99;
  AffinityExponent exponent = AffinityExponent::kNorm;
  /// Divide color distances by their maximum over the edge set before the
  /// exponential. Raw distances are kept in AffinityGraph::edges either way.
  bool normalize_distances = true;
};

struct ColorEdge {
  int i;
  int j;
  double color_distance;
};

struct AffinityGraph {
  int n = 0;
  DenseMatrix weights;
  std::vector<double> degree;
  std::vector<ColorEdge> edges;  // 1-hop adjacent pairs, i < j, raw LAB distance
  double sigma_sq = 0.1;
  double alpha = 0.99;
};

/// Strong/weak seed sets and the matching indication vector
/// (1 on strong, 0.5 on weak, 0 elsewhere).
struct SeedSet {
  std::vector<int> strong;
  std::vector<int> weak;
  std::vector<double> indicator;

  bool empty() const { return strong.empty() && weak.empty(); }
};

SeedSet make_seed_set(int n, std::vector<int> strong, std::vector<int> weak);

struct GeodesicField {
  DenseMatrix dist;
  double sigma_c = 0.0;
};

enum class SigmaCSource { kEdgeDistances, kGeodesicAllPairs };

/// Affinity weight for a color distance.
double affinity_weight(double distance, double sigma_sq, AffinityExponent exponent);

/// Ranking graph over superpixels: 1-hop adjacency, 2-hop adjacency and a
/// clique over the border superpixels.
AffinityGraph build_graph(const Segmentation& seg, const GraphParams& params);

/// Graph with an explicit edge set; every listed pair also lands in `edges`.
/// `colors` provides one LAB triple per node.
AffinityGraph build_graph_from_edges(std::span<const Lab> colors,
                                     std::span<const std::pair<int, int>> edge_pairs,
                                     const GraphParams& params);

/// Graph with a given weight matrix (degree derived from it).
AffinityGraph graph_from_weights(DenseMatrix weights, double alpha);

/// Solves (D - alpha W) g = y by dense LU. Throws SolverError naming the
/// isolated nodes when the system is singular.
std::vector<double> rank(const AffinityGraph& g, std::span<const double> y);
std::vector<double> rank(const AffinityGraph& g, const SeedSet& seeds);

/// max_i |((D - alpha W) g - y)_i|
double rank_residual(const AffinityGraph& g, std::span<const double> ranking,
                     std::span<const double> y);

/// All-pairs shortest paths over the 1-hop edges with cost = color distance.
/// Unreachable pairs get 3x the largest finite distance.
GeodesicField geodesic_distances(const AffinityGraph& g,
                                 SigmaCSource source = SigmaCSource::kEdgeDistances);

/// Same computation on an explicit edge list over n nodes.
GeodesicField geodesic_distances(int n, std::span<const ColorEdge> edges,
                                 SigmaCSource source = SigmaCSource::kEdgeDistances);

}  // namespace saliency
