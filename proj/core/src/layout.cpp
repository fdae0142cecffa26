#include "netsom/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "netsom/clustering.hpp"
#include "netsom/rng.hpp"

namespace netsom {

// Directed edges collapsed to undirected with multiplicity 1 (u < v pairs).
static std::vector<std::pair<int, int>> undirected_support(const DirectedGraph& g) {
  std::vector<std::pair<int, int>> edges;
  g.for_each_edge([&](int u, int v) {
    if (u < v || !g.has_edge(v, u)) {
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
  });
  return edges;
}

double linlog_energy(const DirectedGraph& g, const std::vector<Vec2>& coords, double epsilon) {
  const std::size_t n = g.node_count();
  if (coords.size() != n) throw std::invalid_argument("linlog_energy: coordinate count mismatch");
  double attraction = 0.0;
  for (const auto& [u, v] : undirected_support(g)) {
    const double dx = coords[static_cast<std::size_t>(u)].x - coords[static_cast<std::size_t>(v)].x;
    const double dy = coords[static_cast<std::size_t>(u)].y - coords[static_cast<std::size_t>(v)].y;
    attraction += std::sqrt(dx * dx + dy * dy);
  }
  double repulsion = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double dx = coords[u].x - coords[v].x;
      const double dy = coords[u].y - coords[v].y;
      repulsion += std::log(std::max(std::sqrt(dx * dx + dy * dy), epsilon));
    }
  }
  return attraction - repulsion;
}

// Deterministic pseudo-random unit direction for a coincident pair.
static Vec2 separation_direction(int u, int v) {
  const std::uint64_t h = splitmix64((static_cast<std::uint64_t>(u) << 32) ^
                                     static_cast<std::uint64_t>(v));
  const double angle = 2.0 * std::numbers::pi *
                       (static_cast<double>(h >> 11) * 0x1.0p-53);
  return {std::cos(angle), std::sin(angle)};
}

static void accumulate_gradient(const std::vector<std::pair<int, int>>& edges,
                                const std::vector<Vec2>& pos, double epsilon,
                                std::vector<Vec2>& grad) {
  const std::size_t n = pos.size();
  for (auto& v : grad) v = {0.0, 0.0};

  // Repulsion -ln d: gradient w.r.t. xu is -(xu - xv) / d^2.
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      double dx = pos[u].x - pos[v].x;
      double dy = pos[u].y - pos[v].y;
      double d2 = dx * dx + dy * dy;
      if (d2 < epsilon * epsilon) {
        const Vec2 dir = separation_direction(static_cast<int>(u), static_cast<int>(v));
        dx = dir.x * epsilon;
        dy = dir.y * epsilon;
        d2 = epsilon * epsilon;
      }
      const double inv = 1.0 / d2;
      grad[u].x -= dx * inv;
      grad[u].y -= dy * inv;
      grad[v].x += dx * inv;
      grad[v].y += dy * inv;
    }
  }
  // Attraction |xu - xv|: gradient w.r.t. xu is (xu - xv) / d.
  for (const auto& [ui, vi] : edges) {
    const auto u = static_cast<std::size_t>(ui);
    const auto v = static_cast<std::size_t>(vi);
    double dx = pos[u].x - pos[v].x;
    double dy = pos[u].y - pos[v].y;
    double d = std::sqrt(dx * dx + dy * dy);
    if (d < epsilon) {
      const Vec2 dir = separation_direction(ui, vi);
      dx = dir.x * epsilon;
      dy = dir.y * epsilon;
      d = epsilon;
    }
    const double inv = 1.0 / d;
    grad[u].x += dx * inv;
    grad[u].y += dy * inv;
    grad[v].x -= dx * inv;
    grad[v].y -= dy * inv;
  }
}

Layout linlog_layout(const DirectedGraph& g, const LayoutConfig& cfg) {
  const std::size_t n = g.node_count();
  if (n < 2) throw std::invalid_argument("linlog_layout: need at least 2 nodes");
  if (cfg.iterations < 1) throw std::invalid_argument("linlog_layout: iterations must be >= 1");
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("linlog_layout: epsilon must be > 0");

  const auto edges = undirected_support(g);

  Rng rng(cfg.seed);
  std::vector<Vec2> pos(n);
  for (auto& p : pos) p = {rng.uniform01(), rng.uniform01()};
  // Jitter exact coincidences from the random init apart.
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (pos[u].x == pos[v].x && pos[u].y == pos[v].y) {
        const Vec2 dir = separation_direction(static_cast<int>(u), static_cast<int>(v));
        pos[v].x += dir.x * cfg.epsilon;
        pos[v].y += dir.y * cfg.epsilon;
      }
    }
  }

  double energy = linlog_energy(g, pos, cfg.epsilon);
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  trace.push_back(energy);
  std::vector<Vec2> grad(n), candidate(n);

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const double frac = cfg.iterations == 1
                            ? 0.0
                            : static_cast<double>(iter) / static_cast<double>(cfg.iterations - 1);
    double step = cfg.step_start * std::pow(cfg.step_end / cfg.step_start, frac);

    accumulate_gradient(edges, pos, cfg.epsilon, grad);

    // Halve the step until the move does not increase the energy; a fully
    // rejected step keeps the previous positions.
    for (int attempt = 0; attempt < 40; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        candidate[i].x = pos[i].x - step * grad[i].x;
        candidate[i].y = pos[i].y - step * grad[i].y;
      }
      const double e = linlog_energy(g, candidate, cfg.epsilon);
      if (e <= energy + 1e-9) {
        pos.swap(candidate);
        energy = e;
        break;
      }
      step *= 0.5;
    }
    trace.push_back(energy);
  }

  return {std::move(pos), energy, std::move(trace)};
}

double mean_silhouette(const std::vector<std::vector<double>>& points,
                       const std::vector<int>& labels, int k) {
  const std::size_t n = points.size();
  if (labels.size() != n) throw std::invalid_argument("mean_silhouette: size mismatch");
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];

  double total = 0.0;
  std::vector<double> mean_to(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(mean_to.begin(), mean_to.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double d = 0.0;
      for (std::size_t t = 0; t < points[i].size(); ++t) {
        d += (points[i][t] - points[j][t]) * (points[i][t] - points[j][t]);
      }
      mean_to[static_cast<std::size_t>(labels[j])] += std::sqrt(d);
    }
    const auto own = static_cast<std::size_t>(labels[i]);
    if (sizes[own] <= 1) continue;  // silhouette of a singleton is 0
    const double a = mean_to[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      if (cc == own || sizes[cc] == 0) continue;
      b = std::min(b, mean_to[cc] / static_cast<double>(sizes[cc]));
    }
    if (std::isfinite(b)) total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(n);
}

Partition spatial_partition(const Layout& layout, int q, std::uint64_t seed) {
  const std::size_t n = layout.coords.size();
  if (n == 0) throw std::invalid_argument("spatial_partition: empty layout");
  std::vector<std::vector<double>> points;
  points.reserve(n);
  for (const auto& p : layout.coords) points.push_back({p.x, p.y});

  if (q > 0) {
    const KMeansResult km = kmeans(points, q, derive_seed(seed, "partition"));
    return {km.assignments, q};
  }

  // Silhouette-maximizing q over 2..15.
  const int q_max = static_cast<int>(std::min<std::size_t>(15, n));
  int best_q = 1;
  double best_score = -std::numeric_limits<double>::infinity();
  KMeansResult best_km;
  best_km.assignments.assign(n, 0);
  for (int cand = 2; cand <= q_max; ++cand) {
    const KMeansResult km =
        kmeans(points, cand, derive_seed(seed, "partition:" + std::to_string(cand)));
    const double score = mean_silhouette(points, km.assignments, cand);
    if (score > best_score) {
      best_score = score;
      best_q = cand;
      best_km = km;
    }
  }
  return {best_km.assignments, best_q};
}

std::vector<ClusterLinkStats> inter_clique_fraction(const DirectedGraph& g,
                                                    const Partition& partition,
                                                    const std::vector<int>& clusters, int k) {
  if (partition.labels.size() != g.node_count() || clusters.size() != g.node_count()) {
    throw std::invalid_argument("inter_clique_fraction: label list size != node count");
  }
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i] < 0 || clusters[i] >= k) {
      throw std::invalid_argument("inter_clique_fraction: node '" +
                                  g.node(static_cast<int>(i)).id + "' has no cluster");
    }
  }
  std::vector<ClusterLinkStats> stats(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) stats[static_cast<std::size_t>(c)].cluster = c;
  g.for_each_edge([&](int u, int v) {
    auto& s = stats[static_cast<std::size_t>(clusters[static_cast<std::size_t>(u)])];
    ++s.emitted;
    if (partition.labels[static_cast<std::size_t>(u)] !=
        partition.labels[static_cast<std::size_t>(v)]) {
      ++s.cross;
    }
  });
  for (auto& s : stats) {
    s.has_edges = s.emitted > 0;
    s.fraction = s.has_edges ? static_cast<double>(s.cross) / static_cast<double>(s.emitted) : 0.0;
  }
  return stats;
}

}  // namespace netsom
