#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qloops/loops.hpp"
#include "support/oracles.hpp"

using namespace qloops;

namespace {

std::vector<Domain> small_domains() {
  return {make_domain(DomainKind::torus, 1, 1.0), make_domain(DomainKind::torus, 2, 1.5),
          make_domain(DomainKind::torus, 3, 0.7), make_domain(DomainKind::primal_rect, 1, 1.0),
          make_domain(DomainKind::primal_rect, 3, 2.0), make_domain(DomainKind::dual_rect, 2, 1.0),
          make_domain(DomainKind::dual_rect, 4, 0.8)};
}

Move random_move(const LinkConfig& c, const Domain& d, std::mt19937_64& g) {
  std::uniform_real_distribution<double> U(0, 1);
  const double r = U(g);
  if (c.empty() || r < 0.4) return InsertMove{oracle::random_links(d, 1, 0.5, g)[0]};
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  if (r < 0.7) return DeleteMove{pick(g)};
  return FlipMove{pick(g)};
}

}  // namespace

TEST(TraceLoops, EmptyTorus) {
  for (int L = 1; L <= 5; ++L) {
    const Domain d = make_domain(DomainKind::torus, L, 2.0);
    EXPECT_EQ(count_loops(LinkConfig(d), d), 2 * L);
  }
}

TEST(TraceLoops, OneBarMergesTwoCircles) {
  for (int L = 1; L <= 4; ++L) {
    const Domain d = make_domain(DomainKind::torus, L, 2.0);
    const LinkConfig c = oracle::make_config(d, {{0, 0.7, LinkKind::bar}});
    EXPECT_EQ(count_loops(c, d), 2 * L - 1);
  }
}

TEST(TraceLoops, CrossThenBarKeepsOneLoop) {
  const Domain d = make_domain(DomainKind::torus, 1, 2.0);
  const LinkConfig one = oracle::make_config(d, {{0, 0.0, LinkKind::cross}});
  EXPECT_EQ(count_loops(one, d), 1);
  const LinkConfig two = oracle::make_config(d, {{0, 0.0, LinkKind::cross}, {0, 1.0, LinkKind::bar}});
  EXPECT_EQ(count_loops(two, d), 1);
  EXPECT_EQ(delta_loops(one, d, InsertMove{{0, 1.0, LinkKind::bar}}), 0);
}

TEST(TraceLoops, EmptyRectangles) {
  for (int L : {1, 3, 5, 7}) {
    const Domain d = make_domain(DomainKind::primal_rect, L, 1.0);
    EXPECT_EQ(count_loops(LinkConfig(d), d), L);
  }
  for (int L : {2, 4, 6}) {
    const Domain d = make_domain(DomainKind::dual_rect, L, 1.0);
    EXPECT_EQ(count_loops(LinkConfig(d), d), L);
  }
}

TEST(TraceLoops, AgreesWithBruteForce) {
  std::mt19937_64 g(2024);
  for (const Domain& d : small_domains()) {
    for (int rep = 0; rep < 200; ++rep) {
      const auto links = oracle::random_links(d, rep % 7, 0.5, g);
      const LinkConfig c = oracle::make_config(d, links);
      EXPECT_EQ(count_loops(c, d), oracle::brute_force_loops(links, d)) << serialize(c, d);
    }
  }
}

TEST(TraceLoops, AgreesWithBruteForceOnDenseConfigs) {
  std::mt19937_64 g(99);
  for (const Domain& d : small_domains()) {
    for (int rep = 0; rep < 40; ++rep) {
      const auto links = oracle::random_links(d, 30 + rep, 0.3, g);
      const LinkConfig c = oracle::make_config(d, links);
      EXPECT_EQ(count_loops(c, d), oracle::brute_force_loops(links, d));
    }
  }
}

TEST(TraceLoops, LengthIsConserved) {
  for (const Domain& d : small_domains()) {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const LoopDecomposition D = trace_loops(sample_base(d, 0.5, s), d);
      EXPECT_NEAR(D.total_length(), d.n_sites() * d.beta, 1e-12 * d.n_sites() * d.beta);
      double sum = 0;
      for (const auto& l : D.loops) sum += l.length;
      EXPECT_NEAR(sum, d.n_sites() * d.beta, 1e-12 * d.n_sites() * d.beta);
      EXPECT_EQ(D.ell, static_cast<int>(D.loops.size()));
      for (const auto& iv : D.intervals) EXPECT_GE(iv.loop, 0);
    }
  }
}

TEST(DeltaLoops, Examples) {
  const Domain d = make_domain(DomainKind::torus, 2, 2.0);
  EXPECT_EQ(delta_loops(LinkConfig(d), d, InsertMove{{0, 0.5, LinkKind::bar}}), -1);
  const LinkConfig one = oracle::make_config(d, {{0, 0.5, LinkKind::bar}});
  EXPECT_EQ(delta_loops(one, d, InsertMove{{0, 1.5, LinkKind::bar}}), 1);
}

TEST(DeltaLoops, MatchesRetrace) {
  std::mt19937_64 g(7);
  int cases = 0;
  for (const Domain& d : small_domains()) {
    for (int rep = 0; rep < 1500; ++rep) {
      LinkConfig c = oracle::make_config(d, oracle::random_links(d, rep % 12, 0.5, g));
      const Move m = random_move(c, d, g);
      const int before = count_loops(c, d);
      const int dl = delta_loops(c, d, m);
      const int after = count_loops(apply_move(c, d, m), d);
      ASSERT_EQ(dl, after - before) << serialize(c, d);
      if (!std::holds_alternative<FlipMove>(m)) {
        EXPECT_LE(std::abs(dl), 1);
      } else {
        EXPECT_LE(std::abs(dl), 2);
      }
      const LinkConfig moved = apply_move(c, d, m);
      EXPECT_EQ(apply_and_delta(c, d, m), dl);
      EXPECT_EQ(c, moved);
      ++cases;
    }
  }
  EXPECT_GE(cases, 10000);
}

TEST(Pairing, SinglePoint) {
  const Domain d = make_domain(DomainKind::torus, 2, 2.0);
  const std::vector<SitePoint> X{{0, 0.5}};
  const Pairing p = pairing_at(LinkConfig(d), d, X);
  EXPECT_EQ(p.partner, (std::vector<int>{1, 0}));
  EXPECT_EQ(p.ell_through, 1);
}

TEST(Pairing, TwoSites) {
  const Domain d = make_domain(DomainKind::torus, 2, 2.0);
  const std::vector<SitePoint> X{{0, 0.0}, {1, 0.0}};
  const Pairing p = pairing_at(LinkConfig(d), d, X);
  EXPECT_EQ(p.partner, (std::vector<int>{1, 0, 3, 2}));
  EXPECT_EQ(p.ell_through, 2);
}

TEST(Pairing, ThroughABar) {
  const Domain d = make_domain(DomainKind::torus, 2, 2.0);
  const LinkConfig c = oracle::make_config(d, {{0, 1.0, LinkKind::bar}});
  const std::vector<SitePoint> X{{0, 0.0}, {1, 0.0}};
  const Pairing p = pairing_at(c, d, X);
  EXPECT_EQ(p.partner[1], 3);
  EXPECT_EQ(p.partner[0], 2);
  EXPECT_EQ(p.ell_through, 1);
}

TEST(Pairing, IsAPerfectMatching) {
  std::mt19937_64 g(5);
  for (const Domain& d : small_domains()) {
    for (int rep = 0; rep < 50; ++rep) {
      const LinkConfig c = oracle::make_config(d, oracle::random_links(d, rep % 9, 0.5, g));
      std::vector<SitePoint> X;
      for (int x = d.site_min(); x <= d.site_max() && X.size() < 3; ++x)
        X.push_back({x, d.t_lo() + d.beta * (0.123 + 0.31 * static_cast<double>(X.size()))});
      const Pairing p = pairing_at(c, d, X);
      ASSERT_EQ(p.partner.size(), 2 * X.size());
      for (int i = 0; i < static_cast<int>(p.partner.size()); ++i) {
        EXPECT_NE(p.partner[i], i);
        EXPECT_EQ(p.partner[p.partner[i]], i);
      }
      EXPECT_GE(p.ell_through, 1);
      EXPECT_LE(p.ell_through, static_cast<int>(X.size()));
    }
  }
}

TEST(Pairing, RejectsCollision) {
  const Domain d = make_domain(DomainKind::torus, 2, 2.0);
  const LinkConfig c = oracle::make_config(d, {{0, 1.0, LinkKind::bar}});
  const std::vector<SitePoint> X{{1, 1.0}};
  EXPECT_THROW(pairing_at(c, d, X), std::invalid_argument);
  EXPECT_TRUE(collides_with_link(c, d, {0, 1.0}));
  EXPECT_FALSE(collides_with_link(c, d, {2, 1.0}));
}
