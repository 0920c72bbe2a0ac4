#include "saliency/ranking_graph.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "saliency/error.hpp"

namespace saliency {
namespace {

double color_distance(const Lab& p, const Lab& q) {
  const double dl = p[0] - q[0], da = p[1] - q[1], db = p[2] - q[2];
  return std::sqrt(dl * dl + da * da + db * db);
}

void check_params(const GraphParams& params) {
  if (!(params.sigma_sq > 0.0)) throw ContractError("sigma_sq must be > 0");
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) throw ContractError("alpha must lie in (0,1)");
}

double population_stddev(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace

SeedSet make_seed_set(int n, std::vector<int> strong, std::vector<int> weak) {
  SeedSet s;
  s.indicator.assign(n, 0.0);
  std::sort(strong.begin(), strong.end());
  strong.erase(std::unique(strong.begin(), strong.end()), strong.end());
  std::sort(weak.begin(), weak.end());
  weak.erase(std::unique(weak.begin(), weak.end()), weak.end());
  for (int i : strong) {
    if (i < 0 || i >= n) throw ContractError("seed id out of range");
    s.indicator[i] = 1.0;
  }
  for (int i : weak) {
    if (i < 0 || i >= n) throw ContractError("seed id out of range");
    if (s.indicator[i] == 1.0) throw ContractError("seed " + std::to_string(i) + " is both strong and weak");
    s.indicator[i] = 0.5;
  }
  s.strong = std::move(strong);
  s.weak = std::move(weak);
  return s;
}

double affinity_weight(double distance, double sigma_sq, AffinityExponent exponent) {
  const double d = exponent == AffinityExponent::kNormSquared ? distance * distance : distance;
  return std::exp(-d / sigma_sq);
}

AffinityGraph graph_from_weights(DenseMatrix weights, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ContractError("alpha must lie in (0,1)");
  AffinityGraph g;
  g.n = weights.n;
  g.alpha = alpha;
  g.degree.assign(g.n, 0.0);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) g.degree[i] += weights(i, j);
  }
  g.weights = std::move(weights);
  return g;
}

AffinityGraph build_graph_from_edges(std::span<const Lab> colors,
                                     std::span<const std::pair<int, int>> edge_pairs,
                                     const GraphParams& params) {
  check_params(params);
  const int n = static_cast<int>(colors.size());
  double max_dist = 0.0;
  for (const auto& [i, j] : edge_pairs) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw ContractError("invalid edge");
    max_dist = std::max(max_dist, color_distance(colors[i], colors[j]));
  }
  const double scale = params.normalize_distances && max_dist > 0.0 ? 1.0 / max_dist : 1.0;

  DenseMatrix w(n);
  std::vector<ColorEdge> edges;
  for (const auto& [i, j] : edge_pairs) {
    const double d = color_distance(colors[i], colors[j]);
    const double wij = affinity_weight(d * scale, params.sigma_sq, params.exponent);
    w(i, j) = wij;
    w(j, i) = wij;
    edges.push_back({std::min(i, j), std::max(i, j), d});
  }
  std::sort(edges.begin(), edges.end(), [](const ColorEdge& a, const ColorEdge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const ColorEdge& a, const ColorEdge& b) { return a.i == b.i && a.j == b.j; }),
              edges.end());

  AffinityGraph g = graph_from_weights(std::move(w), params.alpha);
  g.sigma_sq = params.sigma_sq;
  g.edges = std::move(edges);
  return g;
}

AffinityGraph build_graph(const Segmentation& seg, const GraphParams& params) {
  check_params(params);
  const int n = seg.count;

  // Mark the edge set in a dense boolean matrix.
  std::vector<std::uint8_t> linked(static_cast<std::size_t>(n) * n, 0);
  const auto link = [&](int i, int j) {
    if (i == j) return;
    linked[static_cast<std::size_t>(i) * n + j] = 1;
    linked[static_cast<std::size_t>(j) * n + i] = 1;
  };
  for (int i = 0; i < n; ++i) {
    for (int j : seg.adjacency[i]) {
      link(i, j);
      for (int k : seg.adjacency[j]) link(i, k);
    }
  }
  const std::vector<int> border = border_superpixels(seg);
  for (std::size_t a = 0; a < border.size(); ++a) {
    for (std::size_t b = a + 1; b < border.size(); ++b) link(border[a], border[b]);
  }

  double max_dist = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (linked[static_cast<std::size_t>(i) * n + j]) {
        max_dist = std::max(max_dist, color_distance(seg.mean_lab[i], seg.mean_lab[j]));
      }
    }
  }
  const double scale = params.normalize_distances && max_dist > 0.0 ? 1.0 / max_dist : 1.0;

  DenseMatrix w(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!linked[static_cast<std::size_t>(i) * n + j]) continue;
      const double d = color_distance(seg.mean_lab[i], seg.mean_lab[j]) * scale;
      const double wij = affinity_weight(d, params.sigma_sq, params.exponent);
      w(i, j) = wij;
      w(j, i) = wij;
    }
  }

  AffinityGraph g = graph_from_weights(std::move(w), params.alpha);
  g.sigma_sq = params.sigma_sq;
  for (int i = 0; i < n; ++i) {
    for (int j : seg.adjacency[i]) {
      if (j > i) g.edges.push_back({i, j, color_distance(seg.mean_lab[i], seg.mean_lab[j])});
    }
  }
  return g;
}

std::vector<double> rank(const AffinityGraph& g, std::span<const double> y) {
  const int n = g.n;
  if (static_cast<int>(y.size()) != n) throw ContractError("rank: indicator length differs from node count");

  std::vector<int> isolated;
  for (int i = 0; i < n; ++i) {
    if (!(g.degree[i] > 0.0)) isolated.push_back(i);
  }
  if (!isolated.empty()) {
    std::string ids;
    for (int i : isolated) ids += (ids.empty() ? "" : ", ") + std::to_string(i);
    throw SolverError("rank: system is singular, isolated nodes: " + ids);
  }

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = -g.alpha * g.weights(i, j);
    m(i, i) += g.degree[i];
  }
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = y[i];

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Eigen::VectorXd sol = lu.solve(rhs);
  // One round of iterative refinement tightens the residual on badly scaled graphs.
  const Eigen::VectorXd r = rhs - m * sol;
  sol += lu.solve(r);

  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(sol(i))) throw SolverError("rank: non-finite solution at node " + std::to_string(i));
    out[i] = sol(i);
  }
  return out;
}

std::vector<double> rank(const AffinityGraph& g, const SeedSet& seeds) {
  return rank(g, std::span<const double>(seeds.indicator));
}

double rank_residual(const AffinityGraph& g, std::span<const double> ranking, std::span<const double> y) {
  double worst = 0.0;
  for (int i = 0; i < g.n; ++i) {
    double acc = g.degree[i] * ranking[i] - y[i];
    for (int j = 0; j < g.n; ++j) acc -= g.alpha * g.weights(i, j) * ranking[j];
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

GeodesicField geodesic_distances(int n, std::span<const ColorEdge> edges, SigmaCSource source) {
  if (edges.empty()) throw ContractError("geodesic_distances: edge list is empty");
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const ColorEdge& e : edges) {
    adj[e.i].push_back({e.j, e.color_distance});
    adj[e.j].push_back({e.i, e.color_distance});
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  GeodesicField field;
  field.dist = DenseMatrix(n, kInf);

  using Item = std::pair<double, int>;
  std::vector<double> dist(n);
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kInf);
    dist[s] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, s});
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (const auto& [v, cost] : adj[u]) {
        const double nd = d + cost;
        if (nd < dist[v]) {
          dist[v] = nd;
          heap.push({nd, v});
        }
      }
    }
    // Row s fills the upper triangle; sums accumulate outward from the lower id.
    for (int t = s; t < n; ++t) {
      field.dist(s, t) = dist[t];
      field.dist(t, s) = dist[t];
    }
  }

  double max_finite = 0.0;
  for (double d : field.dist.values) {
    if (std::isfinite(d)) max_finite = std::max(max_finite, d);
  }
  for (double& d : field.dist.values) {
    if (!std::isfinite(d)) d = 3.0 * max_finite;
  }

  std::vector<double> samples;
  if (source == SigmaCSource::kEdgeDistances) {
    for (const ColorEdge& e : edges) samples.push_back(e.color_distance);
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) samples.push_back(field.dist(i, j));
    }
  }
  field.sigma_c = population_stddev(samples);
  return field;
}

GeodesicField geodesic_distances(const AffinityGraph& g, SigmaCSource source) {
  return geodesic_distances(g.n, g.edges, source);
}

}  // namespace saliency
