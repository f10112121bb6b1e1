#include "qloops/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qloops {

std::vector<TrivialLoopRecord> classify_trivial(const LoopDecomposition& D, const SimParams& p) {
  std::vector<TrivialLoopRecord> out;
  const double cutoff = p.small_cutoff();
  for (int li = 0; li < static_cast<int>(D.loops.size()); ++li) {
    const Loop& loop = D.loops[li];
    if (loop.visits.size() != 2) continue;
    const DLink& a = D.links[loop.visits[0].link];
    const DLink& b = D.links[loop.visits[1].link];
    if (loop.visits[0].link == loop.visits[1].link) continue;
    if (a.kind != LinkKind::bar || b.kind != LinkKind::bar || a.edge != b.edge) continue;
    const Interval& iv = D.intervals[loop.intervals.front()];
    TrivialLoopRecord r;
    r.loop = li;
    r.edge = a.edge;
    r.t_lo = iv.t_lo;
    r.t_hi = iv.t_hi;
    r.bar_lo = iv.below_link;
    r.bar_hi = iv.above_link;
    r.parity = edge_parity(a.edge);
    r.small = r.height() < cutoff;
    out.push_back(r);
  }
  return out;
}

std::vector<int> trivial_index(const LoopDecomposition& D, const std::vector<TrivialLoopRecord>& tr) {
  std::vector<int> idx(D.loops.size(), -1);
  for (int i = 0; i < static_cast<int>(tr.size()); ++i) idx[tr[i].loop] = i;
  return idx;
}

namespace {

struct Dsu {
  explicit Dsu(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int a) {
    while (p[a] != a) a = p[a] = p[p[a]];
    return a;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
  std::vector<int> p;
};

struct Item {
  double lo, hi;
  int member;  // position in the member list
};

void add_support(StripSet& s, const TrivialLoopRecord& r) {
  s.add(r.edge, r.t_lo, r.t_hi);
  s.add(r.edge + 1, r.t_lo, r.t_hi);
}

// Spans of a family of regions tagged by owner, per strip, for point location.
class TaggedSpans {
 public:
  TaggedSpans(const Domain& d, const std::vector<StripSet>& sets) : d_(d), per_(d.n_sites()) {
    for (int c = 0; c < static_cast<int>(sets.size()); ++c)
      for (int x = d.site_min(); x <= d.site_max(); ++x)
        for (const auto& s : sets[c].on(x)) per_[d.site_index(x)].push_back({s.lo, s.hi, c});
    for (auto& v : per_) std::sort(v.begin(), v.end(), [](const Item& a, const Item& b) { return a.lo < b.lo; });
  }
  // Owner of a closed span containing t on strip x, or -1.
  int owner(int x, double t) const {
    if (!d_.has_site(x)) return -1;
    const auto& v = per_[d_.site_index(x)];
    auto it = std::upper_bound(v.begin(), v.end(), t, [](double tt, const Item& a) { return tt < a.lo; });
    while (it != v.begin()) {
      --it;
      if (it->hi >= t) return it->member;
      // spans of different owners never nest, so the nearest start decides
      break;
    }
    if (d_.periodic() && t == d_.t_lo())
      for (const auto& s : v)
        if (s.hi == d_.t_hi()) return s.member;
    return -1;
  }

 private:
  const Domain& d_;
  std::vector<std::vector<Item>> per_;
};

// Span ends that were wrapped across the seam can be an ulp off the link time they
// came from, so both tests allow a slack of seam_eps.
double seam_eps(const Domain& d) { return 1e-12 * std::max(1.0, d.beta); }

bool covered_below(const StripSet& u, const Domain& d, int x, double t) {
  if (!d.has_site(x)) return false;
  const double eps = seam_eps(d);
  for (const auto& s : u.on(x))
    if (s.lo < t - eps && t <= s.hi + eps) return true;
  if (d.periodic() && t == d.t_lo())
    for (const auto& s : u.on(x))
      if (s.hi == d.t_hi() && s.lo < s.hi) return true;
  return false;
}

bool covered_above(const StripSet& u, const Domain& d, int x, double t) {
  if (!d.has_site(x)) return false;
  const double eps = seam_eps(d);
  for (const auto& s : u.on(x))
    if (s.lo <= t + eps && t < s.hi - eps) return true;
  return false;
}

double uncovered_on_interval(const StripSet& u, const Domain& d, const Interval& iv) {
  double a = iv.t_lo, b = iv.t_hi;
  double cov = 0.0;
  if (d.periodic() && b > d.t_hi()) {
    cov += u.covered_length(iv.site, a, d.t_hi());
    cov += u.covered_length(iv.site, d.t_lo(), b - d.beta);
  } else {
    cov += u.covered_length(iv.site, a, b);
  }
  return (b - a) - cov;
}

}  // namespace

std::vector<std::vector<int>> support_components(const Domain& d, const std::vector<TrivialLoopRecord>& tr,
                                                 const std::vector<int>& members) {
  const int m = static_cast<int>(members.size());
  std::vector<std::vector<Item>> by_edge(d.n_edges());
  for (int i = 0; i < m; ++i) {
    const auto& r = tr[members[i]];
    by_edge[d.edge_index(r.edge)].push_back({r.t_lo, r.t_hi, i});
    if (d.periodic() && r.t_hi > d.t_hi()) by_edge[d.edge_index(r.edge)].push_back({r.t_lo - d.beta, r.t_hi - d.beta, i});
  }
  for (auto& v : by_edge) std::sort(v.begin(), v.end(), [](const Item& a, const Item& b) { return a.lo < b.lo; });
  Dsu dsu(m);
  for (int e = d.edge_min(); e <= d.edge_max(); ++e) {
    const auto& A = by_edge[d.edge_index(e)];
    for (int e2 : {e, e + 2}) {
      if (!d.has_edge(e2)) continue;
      const auto& B = by_edge[d.edge_index(e2)];
      for (const auto& a : A) {
        const int pa = tr[members[a.member]].parity == Parity::primal ? 0 : 1;
        auto it = std::lower_bound(B.begin(), B.end(), a.lo, [](const Item& b, double x) { return b.hi < x; });
        for (; it != B.end() && it->lo <= a.hi; ++it) {
          if (it->member == a.member) continue;
          const int pb = tr[members[it->member]].parity == Parity::primal ? 0 : 1;
          if (pa == pb) dsu.unite(a.member, it->member);
        }
      }
    }
  }
  std::vector<int> id(m, -1);
  std::vector<std::vector<int>> comps;
  for (int i = 0; i < m; ++i) {
    const int r = dsu.find(i);
    if (id[r] < 0) {
      id[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[id[r]].push_back(members[i]);
  }
  return comps;
}

OutsideSummary analyze_outside(const LoopDecomposition& D, const Domain& d, const std::vector<TrivialLoopRecord>& tr,
                               const std::vector<StripSet>& fills) {
  OutsideSummary o;
  o.cluster_union = StripSet(d);
  for (const auto& f : fills) o.cluster_union.add_all(f);
  const StripSet& U = o.cluster_union;
  for (int x = d.site_min(); x <= d.site_max(); ++x) o.vol += d.beta - U.measure(x);
  for (int e = d.edge_min(); e <= d.edge_max(); ++e)
    if (edge_parity(e) == Parity::primal) o.vol1 += d.beta - U.union_measure(e, e + 1);

  const std::vector<int> loop_tr = trivial_index(D, tr);
  auto tall = [&](int loop) { return loop >= 0 && loop_tr[loop] >= 0 && !tr[loop_tr[loop]].small; };

  TaggedSpans owners(d, fills);
  const int nl = static_cast<int>(D.links.size());
  o.links.assign(nl, LinkInfo{});
  for (int id = 0; id < nl; ++id) {
    const DLink& l = D.links[id];
    LinkInfo& info = o.links[id];
    const int e = l.edge;
    info.cluster = owners.owner(e, l.t);
    if (info.cluster < 0) info.cluster = owners.owner(e + 1, l.t);
    const bool has_below = !(l.boundary && !l.top);
    const bool has_above = !(l.boundary && l.top);
    const bool face_below = has_below && !covered_below(U, d, e, l.t) && !covered_below(U, d, e + 1, l.t);
    const bool face_above = has_above && !covered_above(U, d, e, l.t) && !covered_above(U, d, e + 1, l.t);
    info.out = face_below || face_above;
    if (!info.out) continue;
    info.boundary = info.cluster >= 0;
    if (l.kind == LinkKind::bar) {
      const bool tall_below = tall(D.half_loop[id][0]);
      const bool tall_above = tall(D.half_loop[id][1]);
      const bool ok_below = !face_below || tall_below;
      const bool ok_above = !face_above || tall_above;
      info.covered = ok_below && ok_above && ((face_below && tall_below) || (face_above && tall_above));
    }
    ++o.n_out;
    if (id < static_cast<int>(D.n_real)) ++o.n_out_real;
    if (info.boundary) ++o.n_boundary;
    if (info.covered) ++o.n_covered;
    else ++o.n_exposed;
  }
  const double tol = 1e-12 * std::max(1.0, d.beta);
  for (int li = 0; li < static_cast<int>(D.loops.size()); ++li) {
    bool meets = false;
    for (int iv : D.loops[li].intervals)
      if (uncovered_on_interval(U, d, D.intervals[iv]) > tol) {
        meets = true;
        break;
      }
    if (!meets) continue;
    o.loops_outside.push_back(li);
    if (tall(li)) ++o.n_tall_outside;
  }
  return o;
}

ClusterReport build_clusters(const LinkConfig& cfg, const Domain& d, const SimParams& p) {
  ClusterReport r;
  r.domain = d;
  r.params = p;
  r.decomp = trace_loops(cfg, d);
  r.trivial = classify_trivial(r.decomp, p);
  r.loop_trivial = trivial_index(r.decomp, r.trivial);
  std::vector<Cluster> cands;
  for (int par = 0; par < 2; ++par) {
    std::vector<int> members;
    for (int i = 0; i < static_cast<int>(r.trivial.size()); ++i)
      if (r.trivial[i].small && (r.trivial[i].parity == Parity::primal) == (par == 0)) members.push_back(i);
    r.small_components[par] = support_components(d, r.trivial, members);
    for (const auto& comp : r.small_components[par]) {
      Cluster c;
      c.parity = par == 0 ? Parity::primal : Parity::dual;
      c.loops = comp;
      c.support = StripSet(d);
      for (int i : comp) add_support(c.support, r.trivial[i]);
      c.fill = fill_holes(c.support, d);
      cands.push_back(std::move(c));
    }
  }
  // Keep the maximal ones: drop a component lying inside another one's fill.
  struct Box {
    int x0, x1;
    double t0, t1;
  };
  std::vector<Box> box(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    Box b{d.site_max() + 1, d.site_min() - 1, d.t_hi(), d.t_lo()};
    for (int x = d.site_min(); x <= d.site_max(); ++x)
      for (const auto& s : cands[i].fill.on(x)) {
        b.x0 = std::min(b.x0, x);
        b.x1 = std::max(b.x1, x);
        b.t0 = std::min(b.t0, s.lo);
        b.t1 = std::max(b.t1, s.hi);
      }
    box[i] = b;
  }
  std::vector<bool> keep(cands.size(), false);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& rec = r.trivial[cands[i].loops.front()];
    const int x = rec.edge;
    double t = 0.5 * (rec.t_lo + rec.t_hi);
    if (d.periodic() && t >= d.t_hi()) t -= d.beta;
    bool inside = false;
    for (std::size_t j = 0; j < cands.size() && !inside; ++j) {
      if (j == i) continue;
      const Box& b = box[j];
      if (x < b.x0 || x > b.x1 || t < b.t0 || t > b.t1) continue;
      inside = cands[j].fill.contains(x, t);
    }
    keep[i] = !inside;
  }
  for (std::size_t i = 0; i < cands.size(); ++i)
    if (keep[i]) r.clusters.push_back(std::move(cands[i]));
  std::vector<StripSet> fills;
  fills.reserve(r.clusters.size());
  for (const auto& c : r.clusters) fills.push_back(c.fill);
  r.outside = analyze_outside(r.decomp, d, r.trivial, fills);

  for (int li : r.outside.loops_outside) {
    const int ti = r.loop_trivial[li];
    if (ti >= 0 && r.trivial[ti].small)
      throw std::logic_error("build_clusters: a small loop meets the outside");
  }
  if (r.outside.n_covered > 2 * r.outside.n_tall_outside)
    throw std::logic_error("build_clusters: more covered links than twice the tall loops outside");
  return r;
}

Parity boundary_component_parity(const Domain& d) {
  if (!d.periodic()) return d.boundary_parity();
  return edge_parity(d.edge_min());
}

BoundaryComponent boundary_component(const LinkConfig& cfg, const Domain& d, const SimParams& p, SitePoint x0) {
  if (!d.has_site(x0.site)) throw std::invalid_argument("boundary_component: x0 outside the domain");
  const bool t_ok = d.periodic() ? (x0.t >= d.t_lo() && x0.t < d.t_hi()) : (x0.t > d.t_lo() && x0.t < d.t_hi());
  if (!t_ok) throw std::invalid_argument("boundary_component: x0 time outside the domain");
  const LoopDecomposition D = trace_loops(cfg, d);
  const auto tr = classify_trivial(D, p);
  const Parity par = boundary_component_parity(d);
  std::vector<int> members;
  for (int i = 0; i < static_cast<int>(tr.size()); ++i)
    if (tr[i].small && tr[i].parity == par) members.push_back(i);
  const auto comps = support_components(d, tr, members);
  BoundaryComponent out;
  out.boundary_set = StripSet(d);
  for (const auto& comp : comps) {
    bool touches = false;
    for (int i : comp) {
      const auto& r = tr[i];
      if (r.edge == d.edge_min() || r.edge == d.edge_max()) touches = true;
      if (!d.periodic() && (D.links[r.bar_lo].boundary || D.links[r.bar_hi].boundary)) touches = true;
      if (touches) break;
    }
    if (!touches) continue;
    for (int i : comp) add_support(out.boundary_set, tr[i]);
  }
  const GapComponents gc = complement_components(out.boundary_set, d);
  int comp = -1;
  for (const auto& pc : gc.pieces) {
    if (pc.site != x0.site) continue;
    const bool in = (pc.lo < x0.t && x0.t < pc.hi) || (d.periodic() && pc.lo < x0.t + d.beta && x0.t + d.beta < pc.hi) ||
                    (pc.full_circle);
    if (in) {
      comp = pc.comp;
      break;
    }
  }
  out.region = StripSet(d);
  if (comp < 0) return out;
  out.empty = false;
  out.wraps = gc.winds[comp];
  for (const auto& pc : gc.pieces) {
    if (pc.comp != comp) continue;
    out.region.add(pc.site, pc.lo, pc.hi);
    if (!pc.full_circle) out.endpoints += 2;
  }
  const StripSet& R = out.region;
  out.vertical = R.measure(d.site_min()) + R.measure(d.site_max());
  for (int x = d.site_min(); x < d.site_max(); ++x)
    out.vertical += 2.0 * R.union_measure(x, x + 1) - R.measure(x) - R.measure(x + 1);
  out.crossings = out.endpoints / 2;
  out.perimeter = out.vertical + 2.0 * out.crossings;
  return out;
}

BlockOutside block_outside(const ClusterReport& r, const LinkConfig& cfg) {
  const Domain& d = r.domain;
  BlockOutside bo;
  bo.grid = enumerate_blocks(d, r.params.h, r.params.n);
  const StripSet& U = r.outside.cluster_union;
  const double tol = 1e-12 * std::max(1.0, d.beta);
  std::vector<bool> in(bo.grid.blocks.size(), false);
  for (std::size_t k = 0; k < bo.grid.blocks.size(); ++k) {
    const Block& b = bo.grid.blocks[k];
    for (int x : b.sites)
      if ((b.t_hi - b.t_lo) - U.covered_length(x, b.t_lo, b.t_hi) > tol) in[k] = true;
    if (in[k]) bo.blocks.push_back(static_cast<int>(k));
  }
  for (const Link& l : cfg.links()) {
    const int i = bo.grid.block_column_of_edge(l.edge);
    const int j = bo.grid.row_of_time(d, l.t);
    if (in[bo.grid.index(i, j)]) ++bo.n_links;
  }
  return bo;
}

}  // namespace qloops
