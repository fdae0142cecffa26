#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "netsom/graph.hpp"
#include "netsom/som.hpp"

namespace netsom {

struct KMeansResult {
  std::vector<int> assignments;
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
};

/// Lloyd iterations from k-means++ seeding, best of `restarts` runs by
/// inertia. Empty clusters are re-seeded from the farthest point.
KMeansResult kmeans(const std::vector<std::vector<double>>& vectors, int k, std::uint64_t seed,
                    int restarts = 8);

/// BIC-minimizing component count of a diagonal-covariance Gaussian mixture
/// fitted by EM for each k in [k_min, k_max]; ties go to the smaller k. A k
/// whose fits all degenerate is skipped with a warning on stderr.
int select_k(const std::vector<std::vector<double>>& vectors, int k_min, int k_max,
             std::uint64_t seed);

enum class CellClusterMode { prototypes, distance_rows };

struct ClusterModel {
  int k = 0;
  std::vector<int> cell_assignments;    // per grid cell, row-major
  std::vector<std::vector<double>> centroids;
  std::vector<int> entity_assignments;  // per entity, inherited from its cell
};

/// Clusters the map cells with k-means (on prototype vectors by default, or
/// on rows of the inter-cell distance matrix) and propagates the cluster of
/// each entity's assigned cell. k <= 0 selects k automatically over
/// [k_min, k_max].
ClusterModel cluster_cells(const SomMap& map, const std::vector<CellIndex>& entity_cells, int k,
                           std::uint64_t seed, CellClusterMode mode = CellClusterMode::prototypes,
                           int auto_k_min = 2, int auto_k_max = 10);

struct DensityMatrix {
  int k = 0;
  std::vector<std::vector<std::uint64_t>> counts;  // M(i,j): links cluster i -> j
  std::vector<std::vector<double>> p;              // row-normalized; zeros where flagged
  std::vector<bool> empty_row;                     // true when cluster i emits no links
};

/// Counts links between clusters and normalizes per emitter row. Every node
/// of g must have a cluster id in [0, k).
DensityMatrix density_matrix(const DirectedGraph& g, const std::vector<int>& clusters, int k);

struct EliteDistribution {
  std::map<std::string, double> elite;   // category -> frequency among elites
  std::map<std::string, double> sample;  // category -> frequency overall
  double threshold = 0.0;
  std::size_t elite_size = 0;
};

/// Elite = entities with value >= the (1 - percentile) quantile, ties
/// included. Returns normalized category frequencies for the elite set and
/// the whole sample.
EliteDistribution elite_distribution(const std::vector<double>& values,
                                     const std::vector<std::string>& groups, double percentile);

/// Per cell, the modal category of the entities assigned to it (lexicographic
/// tie-break); empty string where no entity landed.
std::vector<std::string> dominant_category_plane(const std::vector<CellIndex>& assignments,
                                                 const std::vector<std::string>& categories,
                                                 GridDims dims);

}  // namespace netsom
