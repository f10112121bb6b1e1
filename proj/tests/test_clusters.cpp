#include <gtest/gtest.h>

#include <cmath>

#include "qloops/clusters.hpp"
#include "qloops/repair.hpp"
#include "qloops/sampler.hpp"
#include "support/oracles.hpp"

using namespace qloops;

namespace {

SimParams params(double u, double n, double kappa) {
  SimParams p;
  p.u = u;
  p.n = n;
  p.kappa = kappa;
  return p;
}

std::vector<Link> stacks(std::initializer_list<int> edges, double lo, double hi, double step) {
  std::vector<Link> out;
  for (int e : edges)
    for (double t = lo; t < hi; t += step) out.push_back({e, t, LinkKind::bar});
  return out;
}

std::vector<LinkConfig> samples(const SimParams& p, const Domain& d, std::uint64_t sweeps, std::uint64_t seed) {
  Schedule sch;
  sch.burnin = 200;
  sch.sweeps = sweeps;
  sch.seed = seed;
  std::vector<LinkConfig> out;
  run_chain(p, d, sch, [&](const ChainState& s) { out.push_back(s.cfg); });
  return out;
}

}  // namespace

TEST(ClassifyTrivial, SmallAndTall) {
  const Domain d = make_domain(DomainKind::torus, 2, 2.0);
  const SimParams p = params(0.5, 2.0, 5.0);  // cutoff 0.1
  const LinkConfig c = oracle::make_config(d, {{0, 0.50, LinkKind::bar}, {0, 0.51, LinkKind::bar}});
  const auto tr = classify_trivial(trace_loops(c, d), p);
  ASSERT_EQ(tr.size(), 2u);  // the short gap and the long way round the circle
  int small = 0;
  for (const auto& r : tr) {
    EXPECT_EQ(r.edge, 0);
    EXPECT_EQ(r.parity, Parity::primal);
    if (r.small) {
      ++small;
      EXPECT_NEAR(r.height(), 0.01, 1e-12);
    } else {
      EXPECT_NEAR(r.height(), 1.99, 1e-12);
    }
  }
  EXPECT_EQ(small, 1);
  const LinkConfig wide = oracle::make_config(d, {{0, 0.5, LinkKind::bar}, {0, 1.0, LinkKind::bar}});
  for (const auto& r : classify_trivial(trace_loops(wide, d), p)) EXPECT_FALSE(r.small);
}

TEST(ClassifyTrivial, NoCutoffMeansAllSmall) {
  const Domain d = make_domain(DomainKind::torus, 1, 2.0);
  const LinkConfig c = oracle::make_config(d, {{0, 0.5, LinkKind::bar}, {0, 1.0, LinkKind::bar}});
  for (const auto& r : classify_trivial(trace_loops(c, d), params(0.5, 2.0, 0.0))) EXPECT_TRUE(r.small);
}

TEST(ClassifyTrivial, CrossesAreNeverTrivial) {
  const Domain d = make_domain(DomainKind::torus, 2, 2.0);
  const LinkConfig c = oracle::make_config(d, {{0, 0.5, LinkKind::cross}, {0, 0.6, LinkKind::bar}});
  const auto D = trace_loops(c, d);
  for (const auto& r : classify_trivial(D, params(0.5, 2.0, 0.0))) {
    EXPECT_EQ(D.links[r.bar_lo].kind, LinkKind::bar);
    EXPECT_EQ(D.links[r.bar_hi].kind, LinkKind::bar);
    for (const auto& v : D.loops[r.loop].visits) EXPECT_NE(D.links[v.link].kind, LinkKind::cross);
  }
  const LinkConfig x = oracle::make_config(d, {{0, 0.5, LinkKind::cross}, {0, 0.6, LinkKind::cross}});
  EXPECT_TRUE(classify_trivial(trace_loops(x, d), params(0.5, 2.0, 0.0)).empty());
}

TEST(ClassifyTrivial, BoundaryBarsCount) {
  // Empty primal rectangle: each boundary edge column is one loop through two frozen bars.
  const Domain d = make_domain(DomainKind::primal_rect, 3, 2.0);
  const auto tr = classify_trivial(trace_loops(LinkConfig(d), d), params(0.5, 2.0, 0.0));
  EXPECT_EQ(tr.size(), 3u);
  for (const auto& r : tr) {
    EXPECT_EQ(r.parity, Parity::primal);
    EXPECT_NEAR(r.height(), 2.0, 1e-12);
  }
}

TEST(BuildClusters, EmptyConfig) {
  const Domain d = make_domain(DomainKind::primal_rect, 3, 2.0);
  const auto r = build_clusters(LinkConfig(d), d, params(0.5, 12.0, 0.1));
  EXPECT_TRUE(r.clusters.empty());
  EXPECT_NEAR(r.outside.vol, 2 * 3 * 2.0, 1e-12);
  EXPECT_EQ(r.outside.n_out, 6);  // the frozen bars all face the outside
}

TEST(BuildClusters, SingleDualLoopIsItsSupport) {
  const Domain d = make_domain(DomainKind::primal_rect, 3, 4.0);
  const LinkConfig c = oracle::make_config(d, {{1, -0.1, LinkKind::bar}, {1, 0.1, LinkKind::bar}});
  const auto r = build_clusters(c, d, params(0.5, 12.0, 0.2));
  ASSERT_EQ(r.clusters.size(), 1u);
  const Cluster& cl = r.clusters[0];
  EXPECT_EQ(cl.parity, Parity::dual);
  EXPECT_EQ(cl.fill, cl.support);
  EXPECT_NEAR(cl.fill.measure(), 0.4, 1e-12);
  EXPECT_NEAR(cl.fill.measure(1), 0.2, 1e-12);
  EXPECT_NEAR(cl.fill.measure(2), 0.2, 1e-12);
  EXPECT_NEAR(r.outside.vol, 6 * 4.0 - 0.4, 1e-12);
  EXPECT_EQ(r.outside.n_boundary, 2);
}

TEST(BuildClusters, TallNeighboursCoverSharedBars) {
  const Domain d = make_domain(DomainKind::primal_rect, 1, 4.0);
  const LinkConfig c =
      oracle::make_config(d, {{0, -1.0, LinkKind::bar}, {0, 0.0, LinkKind::bar}, {0, 1.0, LinkKind::bar}});
  const auto r = build_clusters(c, d, params(0.5, 4.0, 1.0));  // cutoff 0.25, every loop tall
  EXPECT_TRUE(r.clusters.empty());
  ASSERT_EQ(r.trivial.size(), 4u);
  for (std::size_t id = 0; id < r.decomp.n_real; ++id) {
    EXPECT_TRUE(r.outside.links[id].out);
    EXPECT_TRUE(r.outside.links[id].covered);
  }
  EXPECT_LE(r.outside.n_covered, 2 * r.outside.n_tall_outside);
}

TEST(BuildClusters, NestedDualInsidePrimalIsDropped) {
  // A ring of small primal loops around a small dual loop.
  const Domain d = make_domain(DomainKind::primal_rect, 3, 4.0);
  std::vector<Link> links = stacks({0, 2}, -1.0, 1.0, 0.05);
  const auto r0 = build_clusters(oracle::make_config(d, links), d, params(0.5, 12.0, 0.1));
  for (const auto& c : r0.clusters) EXPECT_EQ(c.parity, Parity::primal);
}

TEST(BuildClusters, HardInvariantsOnSamples) {
  for (auto kind : {DomainKind::primal_rect, DomainKind::dual_rect, DomainKind::torus}) {
    const Domain d = make_domain(kind, kind == DomainKind::primal_rect ? 5 : 4, 4.0);
    const SimParams p = params(0.5, 8.0, 0.1);
    for (const auto& c : samples(p, d, 300, 3)) {
      const auto r = build_clusters(c, d, p);
      for (int li : r.outside.loops_outside) {
        const int ti = r.loop_trivial[li];
        EXPECT_FALSE(ti >= 0 && r.trivial[ti].small);
      }
      EXPECT_LE(r.outside.n_covered, 2 * r.outside.n_tall_outside);
      for (std::size_t a = 0; a < r.clusters.size(); ++a)
        for (std::size_t b = a + 1; b < r.clusters.size(); ++b)
          for (int x = d.site_min(); x <= d.site_max(); ++x)
            for (const auto& s : r.clusters[a].fill.on(x))
              EXPECT_FALSE(r.clusters[b].fill.contains_interior(x, 0.5 * (s.lo + s.hi)));
    }
  }
}

TEST(BuildClusters, LargerKappaNeverShrinksOutside) {
  const Domain d = make_domain(DomainKind::primal_rect, 5, 4.0);
  for (const auto& c : samples(params(0.5, 8.0, 0.0), d, 200, 8)) {
    StripSet prev;
    double prev_vol = -1;
    for (double kappa : {0.0, 0.05, 0.1}) {
      const auto r = build_clusters(c, d, params(0.5, 8.0, kappa));
      const StripSet& U = r.outside.cluster_union;
      EXPECT_GE(r.outside.vol, prev_vol - 1e-12);
      if (prev_vol >= 0)
        for (int x = d.site_min(); x <= d.site_max(); ++x)
          for (const auto& s : U.on(x)) EXPECT_TRUE(prev.contains(x, 0.5 * (s.lo + s.hi)));
      prev = U;
      prev_vol = r.outside.vol;
    }
  }
}

TEST(BoundaryComponent, EmptyConfigIsWholeDomain) {
  const Domain d = make_domain(DomainKind::primal_rect, 3, 2.0);
  const auto bc = boundary_component(LinkConfig(d), d, params(0.5, 2.0, 1.0), {0, 0.0});
  EXPECT_FALSE(bc.empty);
  EXPECT_NEAR(bc.region.measure(), 12.0, 1e-12);
  EXPECT_NEAR(bc.perimeter, d.perimeter(), 1e-12);
  EXPECT_NEAR(bc.perimeter, bc.vertical + 2.0 * bc.crossings, 1e-12);
}

TEST(BoundaryComponent, SideStacksLeaveTheMiddleColumnPair) {
  const Domain d = make_domain(DomainKind::primal_rect, 3, 2.0);
  const LinkConfig c = oracle::make_config(d, stacks({-2, 2}, -0.95, 1.0, 0.1));
  const auto bc = boundary_component(c, d, params(0.5, 2.0, 1.0), {0, 0.03});
  EXPECT_FALSE(bc.empty);
  EXPECT_NEAR(bc.region.measure(0), 2.0, 1e-12);
  EXPECT_NEAR(bc.region.measure(1), 2.0, 1e-12);
  EXPECT_NEAR(bc.region.measure(-1), 0.0, 1e-12);
  EXPECT_NEAR(bc.perimeter, 8.0, 1e-12);
  EXPECT_EQ(bc.crossings, 2);
}

TEST(BoundaryComponent, WrappingTorusComponent) {
  const Domain d = make_domain(DomainKind::torus, 3, 2.0);
  const LinkConfig c = oracle::make_config(d, stacks({-2, 2}, 0.05, 2.0, 0.1));
  const auto bc = boundary_component(c, d, params(0.5, 2.0, 1.0), {0, 0.5});
  EXPECT_FALSE(bc.empty);
  EXPECT_TRUE(bc.wraps);
  EXPECT_EQ(bc.crossings, 0);
  EXPECT_NEAR(bc.perimeter, 2 * d.beta, 1e-12);
}

TEST(BoundaryComponent, PointInsideSmallLoopsIsEmpty) {
  const Domain d = make_domain(DomainKind::primal_rect, 3, 2.0);
  const LinkConfig c = oracle::make_config(d, stacks({-2, 0, 2}, -0.95, 1.0, 0.1));
  const auto bc = boundary_component(c, d, params(0.5, 2.0, 0.0), {0, 0.0});
  EXPECT_TRUE(bc.empty);
  EXPECT_EQ(bc.perimeter, 0.0);
  EXPECT_THROW(boundary_component(c, d, params(0.5, 2.0, 0.0), {5, 0.0}), std::invalid_argument);
}

TEST(BlockOutside, EmptyAndFull) {
  const Domain d = make_domain(DomainKind::primal_rect, 3, 2.0);
  const SimParams p = params(0.5, 2.0, 1.0);
  const auto r = build_clusters(LinkConfig(d), d, p);
  const auto bo = block_outside(r, LinkConfig(d));
  EXPECT_EQ(bo.m(), static_cast<int>(bo.grid.blocks.size()));
  EXPECT_EQ(bo.n_links, 0);
  const LinkConfig full = oracle::make_config(d, stacks({-2, 0, 2}, -0.95, 1.0, 0.1));
  const auto rf = build_clusters(full, d, params(0.5, 2.0, 0.0));
  EXPECT_NEAR(rf.outside.vol, 0.0, 1e-12);
  EXPECT_EQ(block_outside(rf, full).m(), 0);
}

TEST(Repair, SmallPrimalLoopsAreAFixedPoint) {
  const Domain d = make_domain(DomainKind::primal_rect, 3, 2.0);
  const LinkConfig c = oracle::make_config(d, stacks({-2, 0, 2}, -0.95, 1.0, 0.1));
  const SimParams p = params(0.5, 2.0, 0.0);
  const RepairOutput r = repair(c, d, p);
  EXPECT_EQ(r.omega_bar, c);
  EXPECT_EQ(r.delta_ell(), 0);
  EXPECT_EQ(r.n_exposed_before, 0);
  EXPECT_NO_THROW(check_repair(r, d));
  const auto pc = count_preimages(r, d, p, &c);
  EXPECT_GE(pc.count, 1);
  EXPECT_TRUE(pc.contains_target);
}

TEST(Repair, IsolatedCrossBecomesBar) {
  const Domain d = make_domain(DomainKind::primal_rect, 3, 4.0);
  const LinkConfig c = oracle::make_config(d, {{0, 0.3, LinkKind::cross}});
  const SimParams p = params(0.5, 2.0, 1.0);
  const RepairOutput r = repair(c, d, p);
  ASSERT_EQ(r.omega_bar.size(), 1u);
  EXPECT_EQ(r.omega_bar.at(0), (Link{0, 0.3, LinkKind::bar}));
  EXPECT_EQ(r.ell_before, count_loops(c, d));
  EXPECT_EQ(r.ell_after, count_loops(r.omega_bar, d));
  EXPECT_GE(4 * r.delta_ell(), r.n_exposed_before);
  EXPECT_GE(r.delta_ell(), 1);
  EXPECT_NO_THROW(check_repair(r, d));
  const auto pc = count_preimages(r, d, p, &c);
  EXPECT_TRUE(pc.contains_target);
  EXPECT_LE(static_cast<double>(pc.count), std::pow(4.0, pc.n_out));
}

TEST(Repair, DualClusterMovesLeft) {
  const Domain d = make_domain(DomainKind::primal_rect, 3, 4.0);
  const LinkConfig c = oracle::make_config(d, {{1, -0.1, LinkKind::bar}, {1, 0.1, LinkKind::bar}});
  const SimParams p = params(0.5, 12.0, 0.2);
  const RepairOutput r = repair(c, d, p);
  EXPECT_EQ(r.omega_bar, oracle::make_config(d, {{0, -0.1, LinkKind::bar}, {0, 0.1, LinkKind::bar}}));
  ASSERT_EQ(r.images.size(), 1u);
  EXPECT_EQ(r.images[0].original, Parity::dual);
  EXPECT_NEAR(r.images[0].fill.measure(0), 0.2, 1e-12);
  EXPECT_NEAR(r.images[0].fill.measure(1), 0.2, 1e-12);
  EXPECT_EQ(r.eta_bar.size(), 2u);
  EXPECT_NO_THROW(check_repair(r, d));
  EXPECT_TRUE(count_preimages(r, d, p, &c).contains_target);
}

TEST(Repair, RequiresPrimalRectangle) {
  const Domain d = make_domain(DomainKind::dual_rect, 2, 1.0);
  EXPECT_THROW(repair(LinkConfig(d), d, params(0.5, 2.0, 0.1)), std::invalid_argument);
}

TEST(Repair, AuditOnSamples) {
  const Domain d = make_domain(DomainKind::primal_rect, 3, 2.0);
  const SimParams p = params(0.5, 12.0, 0.1);
  int enumerated = 0;
  for (const auto& c : samples(p, d, 400, 21)) {
    const RepairOutput r = repair(c, d, p);
    ASSERT_NO_THROW(check_repair(r, d)) << serialize(c, d);
    EXPECT_EQ(r.omega_bar.size(), c.size());
    if (r.outside_bar.n_out_real <= 6) {
      const auto pc = count_preimages(r, d, p, &c);
      EXPECT_TRUE(pc.contains_target) << serialize(c, d);
      EXPECT_LE(static_cast<double>(pc.count), std::pow(4.0, pc.n_out));
      ++enumerated;
    }
  }
  EXPECT_GT(enumerated, 20);
}
