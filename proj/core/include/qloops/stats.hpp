#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qloops {

struct BinLevel {
  std::size_t bin_size = 1;
  std::size_t n_bins = 0;
  double std_error = 0.0;
};

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  double autocorrelation_time = 0.5;
  std::vector<BinLevel> bins;
};

// Mean with a binning-ladder error: bins are doubled while at least kMinBins remain and
// the error is the largest level error.
constexpr std::size_t kMinBins = 16;
EstimatorResult estimate(std::span<const double> xs);

// f(mean_a, mean_b, ...) style estimates with jackknife errors over kJackknifeBlocks
// contiguous blocks.
constexpr std::size_t kJackknifeBlocks = 32;
struct JackknifeResult {
  double value = 0.0;
  double std_error = 0.0;
};
// <ab> - <a><b> from per-sample series.
JackknifeResult jackknife_covariance(std::span<const double> ab, std::span<const double> a,
                                     std::span<const double> b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

double poisson_pmf(double mean, int k);
// P[X >= k]
double poisson_upper(double mean, int k);
// Smallest k with P[X <= k] >= q
int poisson_quantile(double mean, double q);

double chi_square_sf(double stat, double dof);

struct ChiSquareResult {
  double stat = 0.0;
  int dof = 0;
  double p_value = 1.0;
};
// Goodness of fit of integer counts to Poisson(mean); cells are merged from the tails
// until each expected count is at least 5.
ChiSquareResult chi_square_poisson(std::span<const int> counts, double mean);

}  // namespace qloops
