#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "netsom/graph.hpp"

namespace netsom {

// Directed scale-free generator with node attributes shaped like a music
// social platform: capped best-friend out-degrees, tunable reciprocal link
// rate, lognormal hits/comments coupled to in-degree.
// A profile can declare at most this many best friends, whatever the
// configured emission range.
inline constexpr int kMaxBestFriends = 40;

struct SynthConfig {
  std::size_t n_nodes = 2000;
  double artist_fraction = 0.5;
  int out_degree_min = 1;
  int out_degree_max = 10;  // new-node emission range; hard platform cap is 40
  double attachment_exponent = 1.0;
  double reciprocity_target = 0.40;
  std::array<double, 3> label_mix = {0.25, 0.51, 0.24};  // Major, Indie, Other
  int genre_count = 10;
  double hits_mu = 4.0;
  double hits_sigma = 1.2;
  double comments_mu = 2.0;
  double comments_sigma = 1.0;
  double degree_coupling = 0.8;  // shifts the lognormal mean by log1p(in-degree)
  std::uint64_t seed = 1;
};

/// Preferential-attachment wiring (targets drawn with probability
/// proportional to (in_degree + 1)^exponent), then a reverse-edge pass up to
/// the reciprocity target, then attribute sampling. Deterministic given the
/// seed; an unreachable reciprocity target is an error.
DirectedGraph generate(const SynthConfig& cfg);

struct TailFit {
  double exponent = 0.0;
  std::size_t n_tail = 0;     // in-degrees >= xmin entering the fit
  double ks_statistic = 0.0;  // distance between tail and fitted power law
};

/// Maximum-likelihood power-law exponent of the in-degree tail (values >=
/// xmin), with a KS fit statistic. Requires >= 100 nodes with in-degree >= 1
/// and a non-degenerate tail.
TailFit indegree_tail_exponent(const DirectedGraph& g, std::uint64_t xmin = 5);

}  // namespace netsom
