#include "netsom/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "netsom/rng.hpp"

namespace netsom {

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("pearson: need two vectors of equal length >= 3");
  }
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: constant input vector");
  return sxy / std::sqrt(sxx * syy);
}

CorrelationMatrix correlation_matrix(const std::vector<std::string>& names,
                                     const std::vector<std::vector<double>>& columns) {
  if (columns.size() < 2) throw std::invalid_argument("correlation_matrix: need >= 2 columns");
  if (names.size() != columns.size()) {
    throw std::invalid_argument("correlation_matrix: names/columns size mismatch");
  }
  const std::size_t len = columns.front().size();
  if (len < 3) throw std::invalid_argument("correlation_matrix: columns must have length >= 3");
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != len) {
      throw std::invalid_argument("correlation_matrix: column '" + names[c] +
                                  "' has mismatched length");
    }
    const double first = columns[c].front();
    if (std::all_of(columns[c].begin(), columns[c].end(),
                    [&](double v) { return v == first; })) {
      throw std::invalid_argument("correlation_matrix: constant column '" + names[c] + "'");
    }
  }
  const std::size_t k = columns.size();
  CorrelationMatrix cm;
  cm.names = names;
  cm.values.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double r = pearson(columns[i], columns[j]);
      cm.values[i][j] = r;
      cm.values[j][i] = r;
    }
  }
  return cm;
}

static void check_square_symmetric(const std::vector<std::vector<double>>& m, const char* tag) {
  const std::size_t n = m.size();
  if (n < 3) throw std::invalid_argument(std::string(tag) + ": order must be >= 3");
  for (const auto& row : m) {
    if (row.size() != n) throw std::invalid_argument(std::string(tag) + ": matrix not square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(m[i][j] - m[j][i]) > 1e-12) {
        throw std::invalid_argument(std::string(tag) + ": matrix not symmetric");
      }
    }
  }
}

// Upper triangle (i<j) of m under a row+column relabeling.
static std::vector<double> permuted_upper(const std::vector<std::vector<double>>& m,
                                          const std::vector<std::size_t>& perm) {
  const std::size_t n = m.size();
  std::vector<double> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.push_back(m[perm[i]][perm[j]]);
    }
  }
  return out;
}

MantelResult mantel_test(const std::vector<std::vector<double>>& m1,
                         const std::vector<std::vector<double>>& m2, int permutations,
                         std::uint64_t seed) {
  check_square_symmetric(m1, "mantel_test: m1");
  check_square_symmetric(m2, "mantel_test: m2");
  if (m1.size() != m2.size()) throw std::invalid_argument("mantel_test: order mismatch");
  if (permutations < 1) throw std::invalid_argument("mantel_test: permutations must be >= 1");

  const std::size_t n = m1.size();
  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  const std::vector<double> v1 = permuted_upper(m1, identity);
  const std::vector<double> v2 = permuted_upper(m2, identity);

  MantelResult res;
  res.permutations = permutations;
  res.r = pearson(v1, v2);

  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  int at_least = 0;
  for (int p = 0; p < permutations; ++p) {
    // The null excludes the observed labeling itself, so m2 == m1 yields the
    // floor p-value 1/(permutations+1).
    do {
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);
    } while (perm == identity);
    const std::vector<double> vp = permuted_upper(m2, perm);
    const double rp = pearson(v1, vp);
    if (std::abs(rp) >= std::abs(res.r) - 1e-15) ++at_least;
  }
  res.p_bilateral = static_cast<double>(1 + at_least) / static_cast<double>(permutations + 1);
  return res;
}

static double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// sup-distance between the empirical CDF and a normal fitted to the sample.
static double lilliefors_statistic(std::vector<double>& xs) {
  const std::size_t n = xs.size();
  const double m = mean_of(xs);
  const double sd = sample_sd(xs);
  if (sd == 0.0) return 1.0;  // point mass: maximally non-normal
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = normal_cdf((xs[i] - m) / sd);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    const double lo = f - static_cast<double>(i) / static_cast<double>(n);
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

// Null distribution of the statistic for samples of size n, sorted ascending.
// Depends only on (n, replicates, seed), so it is computed once and cached.
static const std::vector<double>& null_table(std::size_t n, int replicates, std::uint64_t seed) {
  static std::mutex mu;
  static std::map<std::tuple<std::size_t, int, std::uint64_t>, std::vector<double>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_tuple(n, replicates, seed);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<double> table(static_cast<std::size_t>(replicates));
  std::vector<double> sample(n);
  Rng rng(seed);
  for (int r = 0; r < replicates; ++r) {
    for (auto& x : sample) x = rng.normal();
    table[static_cast<std::size_t>(r)] = lilliefors_statistic(sample);
  }
  std::sort(table.begin(), table.end());
  return cache.emplace(key, std::move(table)).first->second;
}

NormalityVerdict lilliefors_test(std::span<const double> samples, double alpha,
                                 int mc_replicates, std::uint64_t mc_seed) {
  if (samples.size() < 5) throw std::invalid_argument("lilliefors_test: need n >= 5");
  if (mc_replicates < 1) throw std::invalid_argument("lilliefors_test: replicates must be >= 1");

  std::vector<double> xs(samples.begin(), samples.end());
  NormalityVerdict v;
  v.statistic = lilliefors_statistic(xs);

  const auto& table = null_table(samples.size(), mc_replicates, mc_seed);
  const auto first_ge = std::lower_bound(table.begin(), table.end(), v.statistic);
  const auto count_ge = static_cast<std::size_t>(table.end() - first_ge);
  v.p_value = static_cast<double>(1 + count_ge) / static_cast<double>(mc_replicates + 1);
  v.reject = v.p_value < alpha;
  return v;
}

LogGateResult log_gate(std::span<const double> samples, double alpha, int mc_replicates,
                       std::uint64_t mc_seed) {
  for (double x : samples) {
    if (x < 0.0) throw std::invalid_argument("log_gate: negative value");
  }
  LogGateResult res;
  res.values.assign(samples.begin(), samples.end());
  // Below the test's minimum sample size normality cannot be rejected.
  if (samples.size() >= 5) {
    res.applied = lilliefors_test(samples, alpha, mc_replicates, mc_seed).reject;
  }
  if (res.applied) {
    for (auto& x : res.values) x = std::log1p(x);
  }
  return res;
}

}  // namespace netsom
