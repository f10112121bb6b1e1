#include <gtest/gtest.h>

#include <cmath>

#include "qloops/quantum.hpp"
#include "qloops/smallexact.hpp"

using namespace qloops;

TEST(PartitionSeries, ZeroOrder) {
  const Domain d = make_domain(DomainKind::torus, 1, 0.7);
  const SeriesResult s = partition_series(d, 0.5, 3.0, 0);
  EXPECT_NEAR(s.value, std::exp(-0.7) * 9.0, 1e-14);
  EXPECT_EQ(s.per_k.size(), 1u);
}

// Two sites: T has eigenvalues +1 (x3) and -1, nQ has n and 0 (x3). The loop measure
// carries the factor e^{-beta} of the unit edge intensity.
TEST(PartitionSeries, SwapAndProjectorClosedForms) {
  const Domain d = make_domain(DomainKind::torus, 1, 0.2);
  const double b = 0.2;
  const SeriesResult t = partition_series(d, 1.0, 2.0, 8);
  EXPECT_LE(std::abs(t.value - std::exp(-b) * (3 * std::exp(b) + std::exp(-b))), t.tail_bound + 1e-12);
  const SeriesResult q = partition_series(d, 0.0, 2.0, 8);
  EXPECT_LE(std::abs(q.value - std::exp(-b) * (3 + std::exp(2 * b))), q.tail_bound + 1e-12);
}

TEST(PartitionSeries, MatchesTraceWithinTail) {
  for (int n : {2, 3})
    for (double u : {0.0, 0.5, 1.0})
      for (double beta : {0.1, 0.2, 0.3}) {
        const Domain d = make_domain(DomainKind::torus, 1, beta);
        const SeriesResult s = partition_series(d, u, n, 7);
        const double tr = partition_function(build_loop_model(n, 1, u), beta);
        EXPECT_LE(std::abs(tr - s.value), s.tail_bound + 1e-8) << n << " " << u << " " << beta;
      }
}

TEST(PartitionSeries, TwoEdgeTorus) {
  const Domain d = make_domain(DomainKind::torus, 2, 0.15);
  const SeriesResult s = partition_series(d, 0.5, 2.0, 6);
  const double tr = partition_function(build_loop_model(2, 2, 0.5), 0.15);
  EXPECT_LE(std::abs(tr - s.value), s.tail_bound + 1e-8);
}

TEST(PartitionSeries, TailShrinksWithK) {
  const Domain d = make_domain(DomainKind::torus, 1, 0.3);
  double prev = INFINITY;
  for (int K = 0; K <= 8; ++K) {
    const SeriesResult s = partition_series(d, 0.5, 3.0, K);
    EXPECT_LT(s.tail_bound, prev);
    prev = s.tail_bound;
    double sum = 0;
    for (double v : s.per_k) sum += v;
    EXPECT_NEAR(sum, s.value, 1e-14 * std::max(1.0, s.value));
  }
}

TEST(PartitionSeries, Guards) {
  const Domain d = make_domain(DomainKind::torus, 3, 0.3);
  EXPECT_THROW(partition_series(d, 0.5, 2.0, 12), std::invalid_argument);
  EXPECT_THROW(partition_series(d, 0.5, 2.0, -1), std::invalid_argument);
  EXPECT_THROW(partition_series(d, 1.5, 2.0, 2), std::invalid_argument);
}

TEST(PartitionSeries, LargestOrderFitsTheBudget) {
  // one edge: 2^(K+1) - 1 sequences, so K = 21 fits 5e6 and 22 does not
  const Domain one = make_domain(DomainKind::torus, 1, 0.1);
  EXPECT_EQ(max_series_order(one), 21);
  EXPECT_THROW(partition_series(one, 0.5, 2.0, 22), std::invalid_argument);
  EXPECT_EQ(max_series_order(make_domain(DomainKind::torus, 2, 0.1)), 8);  // 6^8 sums to 2015539
}

TEST(KLTable, PoissonAtNOne) {
  const Domain d = make_domain(DomainKind::torus, 2, 0.4);
  const KLTable t = kl_distribution_series(d, 0.5, 1.0, 5);
  const double nu = d.nu();
  double mass = 0;
  for (int k = 0; k <= 5; ++k) mass += std::exp(-nu) * std::pow(nu, k) / std::tgamma(k + 1.0);
  for (int k = 0; k <= 5; ++k) {
    double pk = 0;
    for (const auto& [key, p] : t.prob)
      if (key.first == k) pk += p;
    EXPECT_NEAR(pk, std::exp(-nu) * std::pow(nu, k) / std::tgamma(k + 1.0) / mass, 1e-12) << k;
  }
}

TEST(KLTable, EmptyTermAndSandwich) {
  for (auto kind : {DomainKind::torus, DomainKind::primal_rect}) {
    const Domain d = make_domain(kind, 1, 0.3);
    const double n = 2.0;
    const KLTable t = kl_distribution_series(d, 0.5, n, 6);
    const SeriesResult s = partition_series(d, 0.5, n, 6);
    const int ell0 = kind == DomainKind::torus ? 2 : 1;
    EXPECT_NEAR(t.prob.at({0, ell0}), std::exp(-d.nu()) * std::pow(n, ell0) / s.value, 1e-12);
    EXPECT_NEAR(t.total(), 1.0, 1e-12);
    EXPECT_GE(t.tail_mass_bound, 0.0);
    EXPECT_LT(t.tail_mass_bound, 1e-3);
    // Unconditioned truncated mass lies in [1 - tail, 1].
    const double Z_lower = s.value, Z_upper = s.value + s.tail_bound;
    EXPECT_LE(Z_lower / Z_upper, 1.0);
    EXPECT_GE(Z_lower / Z_upper, 1.0 - t.tail_mass_bound - 1e-12);
  }
}

TEST(KLTable, LoopCountBoundedByLinks) {
  const Domain d = make_domain(DomainKind::torus, 1, 0.3);
  const KLTable t = kl_distribution_series(d, 0.5, 3.0, 6);
  for (const auto& [key, p] : t.prob) {
    EXPECT_LE(key.second, 2 + key.first);
    EXPECT_GE(key.second, 1);
    EXPECT_GE(p, 0.0);
  }
}
