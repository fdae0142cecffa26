#include "netsom/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "netsom/rng.hpp"

namespace netsom {

static double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

static int nearest_centroid(const std::vector<double>& x,
                            const std::vector<std::vector<double>>& centroids) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = sq_dist(x, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

// k-means++ seeding: each next center drawn with probability proportional to
// the squared distance to the nearest chosen center.
static std::vector<std::vector<double>> kmeanspp_seed(
    const std::vector<std::vector<double>>& xs, int k, Rng& rng) {
  const std::size_t n = xs.size();
  std::vector<std::vector<double>> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(xs[rng.below(n)]);
  std::vector<double> d2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& ctr : centroids) best = std::min(best, sq_dist(xs[i], ctr));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
        pick = i;
      }
    } else {
      pick = rng.below(n);  // all points coincide with a centroid
    }
    centroids.push_back(xs[pick]);
  }
  return centroids;
}

static KMeansResult lloyd(const std::vector<std::vector<double>>& xs, int k, Rng& rng) {
  const std::size_t n = xs.size();
  const std::size_t dim = xs.front().size();
  KMeansResult res;
  res.centroids = kmeanspp_seed(xs, k, rng);
  res.assignments.assign(n, -1);

  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int c = nearest_centroid(xs[i], res.centroids);
      if (c != res.assignments[i]) {
        res.assignments[i] = c;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                          std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(res.assignments[i]);
      ++counts[c];
      for (std::size_t d = 0; d < dim; ++d) sums[c][d] += xs[i][d];
    }
    for (int c = 0; c < k; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      if (counts[cc] == 0) {
        // Re-seed an empty cluster from the farthest point.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = sq_dist(xs[i], res.centroids[static_cast<std::size_t>(
                                              res.assignments[i])]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        res.centroids[cc] = xs[far];
        res.assignments[far] = c;
      } else {
        for (std::size_t d = 0; d < dim; ++d) {
          res.centroids[cc][d] = sums[cc][d] / static_cast<double>(counts[cc]);
        }
      }
    }
  }

  res.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    res.inertia += sq_dist(xs[i], res.centroids[static_cast<std::size_t>(res.assignments[i])]);
  }
  return res;
}

KMeansResult kmeans(const std::vector<std::vector<double>>& vectors, int k, std::uint64_t seed,
                    int restarts) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (static_cast<std::size_t>(k) > vectors.size()) {
    throw std::invalid_argument("kmeans: k exceeds vector count");
  }
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");

  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, "kmeans:" + std::to_string(r)));
    KMeansResult res = lloyd(vectors, k, rng);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

namespace {

// Diagonal-covariance Gaussian mixture fitted by EM.
struct GmmFit {
  bool ok = false;
  double log_likelihood = -std::numeric_limits<double>::infinity();
  double bic = std::numeric_limits<double>::infinity();
};

GmmFit fit_gmm_diag(const std::vector<std::vector<double>>& xs, int k, std::uint64_t seed) {
  const std::size_t n = xs.size();
  const std::size_t dim = xs.front().size();

  // Variance floor relative to the overall data scale.
  double total_var = 0.0;
  {
    std::vector<double> mean(dim, 0.0);
    for (const auto& x : xs) {
      for (std::size_t d = 0; d < dim; ++d) mean[d] += x[d];
    }
    for (auto& m : mean) m /= static_cast<double>(n);
    for (const auto& x : xs) {
      for (std::size_t d = 0; d < dim; ++d) total_var += (x[d] - mean[d]) * (x[d] - mean[d]);
    }
    total_var /= static_cast<double>(n) * static_cast<double>(dim);
  }
  const double var_floor = std::max(1e-9, 1e-6 * total_var);

  // Initialize from a k-means partition.
  const KMeansResult km = kmeans(xs, k, seed, 3);
  std::vector<std::vector<double>> mu = km.centroids;
  std::vector<std::vector<double>> var(static_cast<std::size_t>(k),
                                       std::vector<double>(dim, 0.0));
  std::vector<double> weight(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(km.assignments[i]);
    weight[c] += 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
      var[c][d] += (xs[i][d] - mu[c][d]) * (xs[i][d] - mu[c][d]);
    }
  }
  for (int c = 0; c < k; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    for (std::size_t d = 0; d < dim; ++d) {
      var[cc][d] = std::max(var_floor, weight[cc] > 0 ? var[cc][d] / weight[cc] : var_floor);
    }
    weight[cc] = std::max(weight[cc] / static_cast<double>(n), 1e-10);
  }

  std::vector<std::vector<double>> resp(n, std::vector<double>(static_cast<std::size_t>(k)));
  GmmFit fit;
  double prev_ll = -std::numeric_limits<double>::infinity();
  constexpr double log2pi = 1.8378770664093453;

  for (int iter = 0; iter < 200; ++iter) {
    // E step (log-sum-exp of per-component Gaussians)
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double max_lp = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const auto cc = static_cast<std::size_t>(c);
        double lp = std::log(weight[cc]);
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff = xs[i][d] - mu[cc][d];
          lp -= 0.5 * (log2pi + std::log(var[cc][d]) + diff * diff / var[cc][d]);
        }
        resp[i][cc] = lp;
        max_lp = std::max(max_lp, lp);
      }
      double sum = 0.0;
      for (int c = 0; c < k; ++c) sum += std::exp(resp[i][static_cast<std::size_t>(c)] - max_lp);
      const double log_norm = max_lp + std::log(sum);
      ll += log_norm;
      for (int c = 0; c < k; ++c) {
        auto& r = resp[i][static_cast<std::size_t>(c)];
        r = std::exp(r - log_norm);
      }
    }
    if (!std::isfinite(ll)) return fit;  // degenerate

    // M step
    for (int c = 0; c < k; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      double nk = 0.0;
      std::vector<double> msum(dim, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        nk += resp[i][cc];
        for (std::size_t d = 0; d < dim; ++d) msum[d] += resp[i][cc] * xs[i][d];
      }
      if (nk < 1e-10) nk = 1e-10;
      for (std::size_t d = 0; d < dim; ++d) mu[cc][d] = msum[d] / nk;
      std::vector<double> vsum(dim, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff = xs[i][d] - mu[cc][d];
          vsum[d] += resp[i][cc] * diff * diff;
        }
      }
      for (std::size_t d = 0; d < dim; ++d) var[cc][d] = std::max(var_floor, vsum[d] / nk);
      weight[cc] = nk / static_cast<double>(n);
    }

    if (std::abs(ll - prev_ll) < 1e-7 * (1.0 + std::abs(ll))) {
      prev_ll = ll;
      break;
    }
    prev_ll = ll;
  }

  if (!std::isfinite(prev_ll)) return fit;
  const double params = static_cast<double>(k - 1) + 2.0 * k * static_cast<double>(dim);
  fit.ok = true;
  fit.log_likelihood = prev_ll;
  fit.bic = -2.0 * prev_ll + params * std::log(static_cast<double>(n));
  return fit;
}

}  // namespace

int select_k(const std::vector<std::vector<double>>& vectors, int k_min, int k_max,
             std::uint64_t seed) {
  if (vectors.empty()) throw std::invalid_argument("select_k: empty input");
  if (k_min < 1 || k_max < k_min || static_cast<std::size_t>(k_max) > vectors.size()) {
    throw std::invalid_argument("select_k: invalid k range");
  }
  int best_k = -1;
  double best_bic = std::numeric_limits<double>::infinity();
  for (int k = k_min; k <= k_max; ++k) {
    GmmFit best_fit;
    for (int start = 0; start < 3; ++start) {
      const GmmFit fit =
          fit_gmm_diag(vectors, k, derive_seed(seed, "gmm:" + std::to_string(k) + ":" +
                                                         std::to_string(start)));
      if (fit.ok && fit.bic < best_fit.bic) best_fit = fit;
    }
    if (!best_fit.ok) {
      std::cerr << "select_k: EM failed for k=" << k << ", skipping\n";
      continue;
    }
    if (best_fit.bic < best_bic) {  // strict: ties keep the smaller k
      best_bic = best_fit.bic;
      best_k = k;
    }
  }
  if (best_k < 0) throw std::runtime_error("select_k: EM failed for every k in range");
  return best_k;
}

ClusterModel cluster_cells(const SomMap& map, const std::vector<CellIndex>& entity_cells, int k,
                           std::uint64_t seed, CellClusterMode mode, int auto_k_min,
                           int auto_k_max) {
  if (!map.trained) throw std::invalid_argument("cluster_cells: map not trained");
  const int cells = map.cell_count();

  std::vector<std::vector<double>> xs;
  xs.reserve(static_cast<std::size_t>(cells));
  if (mode == CellClusterMode::prototypes) {
    for (int c = 0; c < cells; ++c) {
      const auto p = map.prototype(c);
      xs.emplace_back(p.begin(), p.end());
    }
  } else {
    // Rows of the inter-cell prototype distance matrix.
    for (int a = 0; a < cells; ++a) {
      std::vector<double> row(static_cast<std::size_t>(cells));
      for (int b = 0; b < cells; ++b) {
        double d = 0.0;
        const auto pa = map.prototype(a);
        const auto pb = map.prototype(b);
        for (std::size_t i = 0; i < map.dim; ++i) d += (pa[i] - pb[i]) * (pa[i] - pb[i]);
        row[static_cast<std::size_t>(b)] = std::sqrt(d);
      }
      xs.push_back(std::move(row));
    }
  }

  if (k <= 0) {
    const int hi = std::min(auto_k_max, cells);
    const int lo = std::min(auto_k_min, hi);
    k = select_k(xs, lo, hi, derive_seed(seed, "select_k"));
  }

  const KMeansResult km = kmeans(xs, k, derive_seed(seed, "cells"));
  ClusterModel model;
  model.k = k;
  model.cell_assignments = km.assignments;
  model.centroids = km.centroids;
  model.entity_assignments.reserve(entity_cells.size());
  for (const CellIndex cell : entity_cells) {
    model.entity_assignments.push_back(km.assignments[static_cast<std::size_t>(map.linear(cell))]);
  }
  return model;
}

DensityMatrix density_matrix(const DirectedGraph& g, const std::vector<int>& clusters, int k) {
  if (clusters.size() != g.node_count()) {
    throw std::invalid_argument("density_matrix: cluster list size != node count");
  }
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i] < 0 || clusters[i] >= k) {
      throw std::invalid_argument("density_matrix: node '" + g.node(static_cast<int>(i)).id +
                                  "' has no cluster in [0," + std::to_string(k) + ")");
    }
  }
  DensityMatrix dm;
  dm.k = k;
  dm.counts.assign(static_cast<std::size_t>(k),
                   std::vector<std::uint64_t>(static_cast<std::size_t>(k), 0));
  g.for_each_edge([&](int u, int v) {
    ++dm.counts[static_cast<std::size_t>(clusters[static_cast<std::size_t>(u)])]
               [static_cast<std::size_t>(clusters[static_cast<std::size_t>(v)])];
  });
  dm.p.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 0.0));
  dm.empty_row.assign(static_cast<std::size_t>(k), false);
  for (int i = 0; i < k; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    std::uint64_t row_total = 0;
    for (auto c : dm.counts[ii]) row_total += c;
    if (row_total == 0) {
      dm.empty_row[ii] = true;
      continue;
    }
    for (int j = 0; j < k; ++j) {
      dm.p[ii][static_cast<std::size_t>(j)] =
          static_cast<double>(dm.counts[ii][static_cast<std::size_t>(j)]) /
          static_cast<double>(row_total);
    }
  }
  return dm;
}

EliteDistribution elite_distribution(const std::vector<double>& values,
                                     const std::vector<std::string>& groups, double percentile) {
  if (values.empty()) throw std::invalid_argument("elite_distribution: empty input");
  if (values.size() != groups.size()) {
    throw std::invalid_argument("elite_distribution: values/groups size mismatch");
  }
  if (!(percentile > 0.0 && percentile < 1.0)) {
    throw std::invalid_argument("elite_distribution: percentile must be in (0,1)");
  }

  const std::size_t n = values.size();
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto top = static_cast<std::size_t>(
      std::ceil(percentile * static_cast<double>(n)));
  const double threshold = sorted[std::min(top, n) - 1];

  EliteDistribution out;
  out.threshold = threshold;
  std::map<std::string, std::size_t> elite_counts, sample_counts;
  for (std::size_t i = 0; i < n; ++i) {
    ++sample_counts[groups[i]];
    if (values[i] >= threshold) {  // ties at the quantile included
      ++elite_counts[groups[i]];
      ++out.elite_size;
    }
  }
  for (const auto& [cat, cnt] : sample_counts) {
    out.sample[cat] = static_cast<double>(cnt) / static_cast<double>(n);
  }
  for (const auto& [cat, cnt] : elite_counts) {
    out.elite[cat] = static_cast<double>(cnt) / static_cast<double>(out.elite_size);
  }
  return out;
}

std::vector<std::string> dominant_category_plane(const std::vector<CellIndex>& assignments,
                                                 const std::vector<std::string>& categories,
                                                 GridDims dims) {
  if (assignments.size() != categories.size()) {
    throw std::invalid_argument("dominant_category_plane: size mismatch");
  }
  const std::size_t cells = static_cast<std::size_t>(dims.rows) * static_cast<std::size_t>(dims.cols);
  std::vector<std::map<std::string, std::size_t>> tallies(cells);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const CellIndex c = assignments[i];
    if (c.row < 0 || c.row >= dims.rows || c.col < 0 || c.col >= dims.cols) {
      throw std::invalid_argument("dominant_category_plane: assignment outside grid");
    }
    ++tallies[static_cast<std::size_t>(c.row * dims.cols + c.col)][categories[i]];
  }
  std::vector<std::string> plane(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t best = 0;
    for (const auto& [cat, cnt] : tallies[cell]) {  // map order: lexicographic tie-break
      if (cnt > best) {
        best = cnt;
        plane[cell] = cat;
      }
    }
  }
  return plane;
}

}  // namespace netsom
