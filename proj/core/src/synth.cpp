#include "netsom/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netsom/rng.hpp"

namespace netsom {

static void validate(const SynthConfig& cfg) {
  if (cfg.n_nodes < 3) throw std::invalid_argument("synth: need at least 3 nodes");
  if (cfg.artist_fraction < 0.0 || cfg.artist_fraction > 1.0) {
    throw std::invalid_argument("synth: artist_fraction outside [0,1]");
  }
  if (cfg.out_degree_min < 1 || cfg.out_degree_max < cfg.out_degree_min ||
      cfg.out_degree_max > kMaxBestFriends) {
    throw std::invalid_argument("synth: out-degree range must satisfy 1 <= min <= max <= 40");
  }
  if (cfg.reciprocity_target < 0.0 || cfg.reciprocity_target > 1.0) {
    throw std::invalid_argument("synth: reciprocity target outside [0,1]");
  }
  const double mix = cfg.label_mix[0] + cfg.label_mix[1] + cfg.label_mix[2];
  if (std::abs(mix - 1.0) > 1e-9) throw std::invalid_argument("synth: label mix must sum to 1");
  if (cfg.genre_count < 1) throw std::invalid_argument("synth: genre_count must be >= 1");
}

static std::string node_id(std::size_t i, std::size_t n) {
  std::size_t width = 1;
  for (std::size_t v = n - 1; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(i);
  return "n" + std::string(width - digits.size(), '0') + digits;
}

DirectedGraph generate(const SynthConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.n_nodes;

  // --- wiring: sequential attachment, targets ~ (in_degree + 1)^exponent ---
  Rng wire(derive_seed(cfg.seed, "wiring"));
  std::vector<std::vector<int>> out(n);
  std::vector<std::uint64_t> indeg(n, 0);
  std::vector<double> weight(n, 0.0);
  std::size_t edge_total = 0;

  auto has_out = [&](std::size_t u, int v) {
    return std::find(out[u].begin(), out[u].end(), v) != out[u].end();
  };

  // Seed triangle 0->1->2->0; every later node attaches to existing ones.
  const std::size_t seed_nodes = 3;
  for (std::size_t i = 0; i < seed_nodes; ++i) {
    const int v = static_cast<int>((i + 1) % seed_nodes);
    out[i].push_back(v);
    ++indeg[static_cast<std::size_t>(v)];
    ++edge_total;
  }

  for (std::size_t u = seed_nodes; u < n; ++u) {
    const int span = cfg.out_degree_max - cfg.out_degree_min + 1;
    std::size_t k = cfg.out_degree_min + static_cast<std::size_t>(wire.below(
                                             static_cast<std::uint64_t>(span)));
    k = std::min(k, u);  // cannot exceed the number of existing nodes

    // Cumulative attachment weights over existing nodes.
    double total = 0.0;
    for (std::size_t v = 0; v < u; ++v) {
      total += std::pow(static_cast<double>(indeg[v]) + 1.0, cfg.attachment_exponent);
      weight[v] = total;
    }
    std::size_t placed = 0;
    int guard = 0;
    while (placed < k && guard < 400) {
      const double target = wire.uniform01() * total;
      const auto it = std::upper_bound(weight.begin(), weight.begin() +
                                       static_cast<std::ptrdiff_t>(u), target);
      auto v = static_cast<std::size_t>(it - weight.begin());
      if (v >= u) v = u - 1;
      if (!has_out(u, static_cast<int>(v))) {
        // weights stay as computed before this node's draws; the in-degree
        // bumps from its own links do not feed back into them
        out[u].push_back(static_cast<int>(v));
        ++indeg[v];
        ++edge_total;
        ++placed;
      }
      ++guard;
    }
  }

  // --- reciprocity: add reverse edges until the global rate hits target ---
  Rng recip(derive_seed(cfg.seed, "reciprocity"));
  auto reciprocal_count = [&]() {
    std::size_t c = 0;
    for (std::size_t u = 0; u < n; ++u) {
      for (int v : out[u]) {
        if (has_out(static_cast<std::size_t>(v), static_cast<int>(u))) ++c;
      }
    }
    return c;
  };
  std::size_t mutual = reciprocal_count();
  double fraction = static_cast<double>(mutual) / static_cast<double>(edge_total);
  if (fraction > cfg.reciprocity_target + 0.02) {
    throw std::invalid_argument("synth: reciprocity target below the generated base rate");
  }
  if (fraction < cfg.reciprocity_target) {
    std::vector<std::pair<int, int>> candidates;  // one-way edges
    for (std::size_t u = 0; u < n; ++u) {
      for (int v : out[u]) {
        if (!has_out(static_cast<std::size_t>(v), static_cast<int>(u))) {
          candidates.emplace_back(static_cast<int>(u), v);
        }
      }
    }
    recip.shuffle(candidates);
    for (const auto& [u, v] : candidates) {
      if (fraction >= cfg.reciprocity_target) break;
      // the reverse edge raises v's out-degree; respect the platform cap
      if (out[static_cast<std::size_t>(v)].size() >=
          static_cast<std::size_t>(kMaxBestFriends)) {
        continue;
      }
      out[static_cast<std::size_t>(v)].push_back(u);
      ++indeg[static_cast<std::size_t>(u)];
      ++edge_total;
      mutual += 2;
      fraction = static_cast<double>(mutual) / static_cast<double>(edge_total);
    }
    if (fraction < cfg.reciprocity_target - 0.02) {
      throw std::invalid_argument("synth: reciprocity target unreachable under the out-degree cap");
    }
  }

  // --- attributes ---
  Rng attr(derive_seed(cfg.seed, "attributes"));
  std::vector<NodeRecord> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    NodeRecord& r = nodes[i];
    r.id = node_id(i, n);
    r.is_artist = attr.uniform01() < cfg.artist_fraction;
    const double shift = cfg.degree_coupling * std::log1p(static_cast<double>(indeg[i]));
    r.hits = static_cast<std::uint64_t>(
        std::llround(attr.lognormal(cfg.hits_mu + shift, cfg.hits_sigma)));
    r.comments = static_cast<std::uint64_t>(
        std::llround(attr.lognormal(cfg.comments_mu + shift, cfg.comments_sigma)));
    const double u = attr.uniform01();
    r.label = u < cfg.label_mix[0]               ? "Major"
              : u < cfg.label_mix[0] + cfg.label_mix[1] ? "Indie"
                                                        : "Other";
    r.genre = "genre_" + std::to_string(attr.below(static_cast<std::uint64_t>(cfg.genre_count)));
  }

  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(edge_total);
  for (std::size_t u = 0; u < n; ++u) {
    for (int v : out[u]) edges.emplace_back(nodes[u].id, nodes[static_cast<std::size_t>(v)].id);
  }
  return from_edge_list(std::move(nodes), edges).graph;
}

TailFit indegree_tail_exponent(const DirectedGraph& g, std::uint64_t xmin) {
  if (xmin < 1) throw std::invalid_argument("indegree_tail_exponent: xmin must be >= 1");
  std::size_t nonzero = 0;
  std::vector<double> tail;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const std::size_t d = in_degree(g, static_cast<int>(i));
    if (d >= 1) ++nonzero;
    if (d >= xmin) tail.push_back(static_cast<double>(d));
  }
  if (nonzero < 100) {
    throw std::invalid_argument("indegree_tail_exponent: need >= 100 nodes with in-degree >= 1");
  }
  if (tail.size() < 10) {
    throw std::invalid_argument("indegree_tail_exponent: too few tail samples (in-degree >= " +
                                std::to_string(xmin) + ")");
  }
  const double first = tail.front();
  if (std::all_of(tail.begin(), tail.end(), [&](double v) { return v == first; })) {
    throw std::invalid_argument("indegree_tail_exponent: degenerate all-equal tail");
  }

  // Hill-style discrete MLE with the standard -1/2 continuity shift.
  const double shift = static_cast<double>(xmin) - 0.5;
  double log_sum = 0.0;
  for (double x : tail) log_sum += std::log(x / shift);
  TailFit fit;
  fit.n_tail = tail.size();
  fit.exponent = 1.0 + static_cast<double>(tail.size()) / log_sum;

  // KS distance between the empirical tail and the fitted discrete power
  // law P(X = x) = x^-alpha / Z over integers x >= xmin.
  std::sort(tail.begin(), tail.end());
  const auto max_x = static_cast<std::uint64_t>(tail.back());
  std::vector<double> cdf(max_x + 1, 0.0);
  double partial = 0.0;
  for (std::uint64_t x = xmin; x <= max_x; ++x) {
    partial += std::pow(static_cast<double>(x), -fit.exponent);
    cdf[x] = partial;
  }
  // remaining zeta mass beyond the largest observation
  const double tail_mass = std::pow(static_cast<double>(max_x) + 0.5, 1.0 - fit.exponent) /
                           (fit.exponent - 1.0);
  const double z = partial + tail_mass;
  const auto m = static_cast<double>(tail.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double f = cdf[static_cast<std::uint64_t>(tail[i])] / z;
    const double hi = static_cast<double>(i + 1) / m - f;
    const double lo = f - static_cast<double>(i) / m;
    ks = std::max(ks, std::max(hi, lo));
  }
  fit.ks_statistic = ks;
  return fit;
}

}  // namespace netsom
