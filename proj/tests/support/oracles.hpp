#pragma once

// Test-side reference implementations. Nothing here calls the tracing code in core.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "qloops/geometry.hpp"
#include "qloops/linkconfig.hpp"

namespace oracle {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
  int components() {
    int c = 0;
    for (int i = 0; i < static_cast<int>(p.size()); ++i) c += find(i) == i;
    return c;
  }
};

// Loop count by cutting every site line at the link times of its two incident edges and
// joining the pieces: a bar joins below with below and above with above, a cross joins
// below with above. Rectangles join the top (bottom) pieces of the two sites of every
// boundary-parity edge.
inline int brute_force_loops(const std::vector<qloops::Link>& links, const qloops::Domain& d) {
  const int ns = d.n_sites();
  std::vector<std::vector<double>> ev(ns);
  for (const auto& l : links) {
    ev[l.edge - d.site_min()].push_back(l.t);
    ev[l.edge + 1 - d.site_min()].push_back(l.t);
  }
  std::vector<int> base(ns + 1, 0);
  for (int i = 0; i < ns; ++i) {
    std::sort(ev[i].begin(), ev[i].end());
    const int k = static_cast<int>(ev[i].size());
    base[i + 1] = base[i] + (d.periodic() ? std::max(k, 1) : k + 1);
  }
  Dsu dsu(base[ns]);
  auto below = [&](int i, double t) {
    const int j = static_cast<int>(std::lower_bound(ev[i].begin(), ev[i].end(), t) - ev[i].begin());
    const int k = static_cast<int>(ev[i].size());
    return base[i] + (d.periodic() ? (j + k - 1) % k : j);
  };
  auto above = [&](int i, double t) {
    const int j = static_cast<int>(std::lower_bound(ev[i].begin(), ev[i].end(), t) - ev[i].begin());
    return base[i] + (d.periodic() ? j : j + 1);
  };
  for (const auto& l : links) {
    const int a = l.edge - d.site_min(), b = a + 1;
    if (l.kind == qloops::LinkKind::bar) {
      dsu.unite(below(a, l.t), below(b, l.t));
      dsu.unite(above(a, l.t), above(b, l.t));
    } else {
      dsu.unite(below(a, l.t), above(b, l.t));
      dsu.unite(above(a, l.t), below(b, l.t));
    }
  }
  if (!d.periodic()) {
    const int want = d.kind == qloops::DomainKind::primal_rect ? 0 : 1;
    for (int x = d.site_min(); x < d.site_max(); ++x) {
      if (((x % 2) + 2) % 2 != want) continue;
      const int a = x - d.site_min(), b = a + 1;
      dsu.unite(base[a], base[b]);
      dsu.unite(base[a + 1] - 1, base[b + 1] - 1);
    }
  }
  return dsu.components();
}

inline std::vector<qloops::Link> random_links(const qloops::Domain& d, int count, double u, std::mt19937_64& g) {
  std::uniform_int_distribution<int> edge(d.edge_min(), d.edge_max());
  std::uniform_real_distribution<double> t(d.t_lo(), d.t_hi());
  std::uniform_real_distribution<double> c(0.0, 1.0);
  std::vector<qloops::Link> out;
  for (int i = 0; i < count; ++i) {
    double tt = t(g);
    while (tt <= d.t_lo() || tt >= d.t_hi()) tt = t(g);
    out.push_back({edge(g), tt, c(g) < u ? qloops::LinkKind::cross : qloops::LinkKind::bar});
  }
  return out;
}

inline qloops::LinkConfig make_config(const qloops::Domain& d, const std::vector<qloops::Link>& links) {
  qloops::LinkConfig cfg(d);
  for (const auto& l : links) cfg.insert(l);
  return cfg;
}

// Spectrum-free closed forms on two sites with n = 2.
inline double q_gibbs_two_sites(double beta) { return std::exp(beta) / (std::exp(beta) + 3.0); }

}  // namespace oracle
