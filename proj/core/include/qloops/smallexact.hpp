#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qloops/geometry.hpp"

namespace qloops {

struct SeriesResult {
  double value = 0.0;       // sum of the k <= K terms of E_1[n^ell]
  double tail_bound = 0.0;  // bound on the omitted k > K terms
  int K = 0;
  std::vector<double> per_k;
};

// Budget: (2 * #edges)^K time-ordered edge/type sequences.
constexpr double kSeriesBudget = 5e6;
// Largest K whose sequences up to order K fit in the budget.
int max_series_order(const Domain& d);

SeriesResult partition_series(const Domain& d, double u, double n, int K);

struct KLTable {
  int K = 0;
  // (k, ell) -> probability under the n-weighted law, conditioned on k <= K
  std::map<std::pair<int, int>, double> prob;
  double tail_mass_bound = 0.0;  // bound on the unconditioned P[k > K]
  double total() const;
};

KLTable kl_distribution_series(const Domain& d, double u, double n, int K);

}  // namespace qloops
