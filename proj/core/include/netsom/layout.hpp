#pragma once

#include <cstdint>
#include <vector>

#include "netsom/graph.hpp"

namespace netsom {

struct LayoutConfig {
  int iterations = 400;
  double step_start = 0.1;
  double step_end = 1e-4;
  double epsilon = 1e-7;  // minimum distance guard
  std::uint64_t seed = 1;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Layout {
  std::vector<Vec2> coords;  // node-index order
  double energy = 0.0;
  std::vector<double> energy_trace;  // energy after each iteration, init first
};

struct Partition {
  std::vector<int> labels;  // per node, in [0, q)
  int q = 0;
};

/// Node-repulsion LinLog energy on the undirected support of g:
/// sum over edges of |xu - xv| minus sum over all pairs of ln(max(d, eps)).
double linlog_energy(const DirectedGraph& g, const std::vector<Vec2>& coords, double epsilon);

/// Gradient descent from seeded random positions in the unit square, step
/// size interpolated geometrically, with step halving whenever a step would
/// increase the energy. O(n^2) force pass per iteration (fine up to a few
/// thousand nodes). Requires n >= 2.
Layout linlog_layout(const DirectedGraph& g, const LayoutConfig& cfg);

/// k-means on the layout coordinates; q <= 0 picks the silhouette-maximizing
/// partition count over [2, 15].
Partition spatial_partition(const Layout& layout, int q, std::uint64_t seed);

/// Mean silhouette width of a labeled point set (0 for singleton clusters).
double mean_silhouette(const std::vector<std::vector<double>>& points,
                       const std::vector<int>& labels, int k);

struct ClusterLinkStats {
  int cluster = 0;
  std::uint64_t emitted = 0;  // directed edges with emitter in this cluster
  std::uint64_t cross = 0;    // of those, endpoints in different partitions
  double fraction = 0.0;
  bool has_edges = false;
};

/// Per popularity cluster, the fraction of emitted links whose endpoints lie
/// in different spatial partitions.
std::vector<ClusterLinkStats> inter_clique_fraction(const DirectedGraph& g,
                                                    const Partition& partition,
                                                    const std::vector<int>& clusters, int k);

}  // namespace netsom
