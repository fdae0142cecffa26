#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace netsom {

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // symmetric, unit diagonal
};

struct MantelResult {
  double r = 0.0;
  double p_bilateral = 1.0;
  int permutations = 0;
};

struct NormalityVerdict {
  double statistic = 0.0;  // sup |F_n - Phi|, location/scale estimated
  double p_value = 1.0;
  bool reject = false;
};

/// Pairwise Pearson coefficients. Columns must have equal length >= 3 and be
/// non-constant; a constant column is an error naming it.
CorrelationMatrix correlation_matrix(const std::vector<std::string>& names,
                                     const std::vector<std::vector<double>>& columns);

double pearson(std::span<const double> x, std::span<const double> y);

/// Correlation of the off-diagonal upper triangles of two symmetric matrices,
/// with a bilateral permutation p-value: rows+columns of m2 are permuted
/// jointly, identity permutations are re-drawn, and
/// p = (1 + #{|r*| >= |r|}) / (permutations + 1).
MantelResult mantel_test(const std::vector<std::vector<double>>& m1,
                         const std::vector<std::vector<double>>& m2, int permutations,
                         std::uint64_t seed);

/// Kolmogorov-Smirnov test against a normal with mean and variance estimated
/// from the sample; the p-value comes from a seeded Monte Carlo null table
/// (cached per (n, replicates, seed)). Requires n >= 5.
NormalityVerdict lilliefors_test(std::span<const double> samples, double alpha,
                                 int mc_replicates = 10000,
                                 std::uint64_t mc_seed = 0x6c696c6cULL);

struct LogGateResult {
  std::vector<double> values;
  bool applied = false;
};

/// Applies log(1+x) elementwise when lilliefors_test rejects normality at
/// alpha, otherwise returns the input unchanged. All inputs must be >= 0.
/// Samples too small to test (n < 5) pass through unchanged.
LogGateResult log_gate(std::span<const double> samples, double alpha, int mc_replicates = 10000,
                       std::uint64_t mc_seed = 0x6c696c6cULL);

double mean_of(std::span<const double> xs);
/// Sample standard deviation (n-1 denominator).
double sample_sd(std::span<const double> xs);

}  // namespace netsom
