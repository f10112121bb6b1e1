#include "qloops/loops.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

namespace qloops {

double LoopDecomposition::total_length() const {
  double s = 0.0;
  for (const auto& l : loops) s += l.length;
  return s;
}

namespace {

// End of a link: side 0 = left site, 1 = right site; above = upper end on that site.
struct End {
  int side;
  bool above;
};

End link_partner(End e, LinkKind kind) {
  if (kind == LinkKind::bar) return End{1 - e.side, e.above};
  return End{1 - e.side, !e.above};
}

int passage_half(End a, End b) {
  auto is_ref = [](End e) { return e.side == 0 && !e.above; };
  return (is_ref(a) || is_ref(b)) ? 0 : 1;
}

}  // namespace

LoopDecomposition trace_loops(const LinkConfig& cfg, const Domain& d) {
  LoopDecomposition D;
  for (int e = d.edge_min(); e <= d.edge_max(); ++e)
    for (const auto& el : cfg.on_edge(e)) D.links.push_back(DLink{e, el.t, el.kind, false, false});
  D.n_real = D.links.size();
  if (!d.periodic()) {
    for (int e = d.edge_min(); e <= d.edge_max(); ++e) {
      if (!d.is_boundary_edge(e)) continue;
      D.links.push_back(DLink{e, d.t_lo(), LinkKind::bar, true, false});
      D.links.push_back(DLink{e, d.t_hi(), LinkKind::bar, true, true});
    }
  }
  const int ns = d.n_sites();
  const int nl = static_cast<int>(D.links.size());
  std::vector<std::vector<std::pair<double, int>>> ev(ns);
  for (int id = 0; id < nl; ++id) {
    const auto& l = D.links[id];
    ev[d.site_index(l.edge)].push_back({l.t, id});
    ev[d.site_index(l.edge + 1)].push_back({l.t, id});
  }
  std::vector<std::array<int, 2>> pos(nl, {-1, -1});
  std::vector<int> base(ns + 1, 0);
  for (int s = 0; s < ns; ++s) {
    std::sort(ev[s].begin(), ev[s].end());
    const int m = static_cast<int>(ev[s].size());
    for (int k = 0; k < m; ++k) {
      const int id = ev[s][k].second;
      const int side = (d.site_min() + s == D.links[id].edge) ? 0 : 1;
      pos[id][side] = k;
    }
    const int count = d.periodic() ? std::max(1, m) : m - 1;
    base[s + 1] = base[s] + count;
  }
  D.intervals.resize(base[ns]);
  for (int s = 0; s < ns; ++s) {
    const int m = static_cast<int>(ev[s].size());
    const int x = d.site_min() + s;
    if (d.periodic() && m == 0) {
      D.intervals[base[s]] = Interval{x, d.t_lo(), d.t_hi(), -1, -1, -1};
      continue;
    }
    const int count = base[s + 1] - base[s];
    for (int k = 0; k < count; ++k) {
      const int k2 = (k + 1) % m;
      double hi = ev[s][k2].first;
      if (d.periodic() && k2 <= k) hi += d.beta;
      D.intervals[base[s] + k] = Interval{x, ev[s][k].first, hi, ev[s][k].second, ev[s][k2].second, -1};
    }
  }
  auto interval_above = [&](int s, int k) { return base[s] + k; };
  auto interval_below = [&](int s, int k) {
    if (d.periodic()) {
      const int m = static_cast<int>(ev[s].size());
      return base[s] + (k - 1 + m) % m;
    }
    return base[s] + k - 1;
  };

  D.half_loop.assign(nl, {-1, -1});
  const int ni = static_cast<int>(D.intervals.size());
  for (int start = 0; start < ni; ++start) {
    if (D.intervals[start].loop >= 0) continue;
    const int loop_id = static_cast<int>(D.loops.size());
    D.loops.emplace_back();
    Loop& loop = D.loops.back();
    int cur = start;
    bool up = true;
    while (true) {
      Interval& iv = D.intervals[cur];
      iv.loop = loop_id;
      loop.intervals.push_back(cur);
      loop.length += iv.t_hi - iv.t_lo;
      if (iv.below_link < 0) break;
      const int id = up ? iv.above_link : iv.below_link;
      const DLink& lk = D.links[id];
      const End in{iv.site == lk.edge ? 0 : 1, !up};
      const End out = link_partner(in, lk.kind);
      const int half = passage_half(in, out);
      loop.visits.push_back(LinkVisit{id, half});
      D.half_loop[id][half] = loop_id;
      const int s_out = d.site_index(lk.edge + out.side);
      const int k = pos[id][out.side];
      int next;
      if (out.above) {
        next = interval_above(s_out, k);
        up = true;
      } else {
        next = interval_below(s_out, k);
        up = false;
      }
      if (next == start) {
        assert(up);
        break;
      }
      cur = next;
    }
  }
  D.ell = static_cast<int>(D.loops.size());
  return D;
}

int count_loops(const LinkConfig& cfg, const Domain& d) { return trace_loops(cfg, d).ell; }

namespace {

struct Key {
  double t;
  int rank;
  bool operator<(const Key& o) const { return t < o.t || (t == o.t && rank < o.rank); }
  bool operator==(const Key& o) const { return t == o.t && rank == o.rank; }
};

enum class EvType { none, link, marker, boundary };

struct Event {
  EvType type = EvType::none;
  Key key{0.0, 0};
  int edge = 0;
  LinkKind kind = LinkKind::bar;
  int marker = -1;
};

class Walker {
 public:
  Walker(const LinkConfig& cfg, const Domain& d, std::span<const Marker> markers)
      : cfg_(cfg), d_(d), markers_(markers) {}

  // Next event strictly after (up) or before (down) the key on site x.
  Event next(int x, Key k, bool up) const {
    Event best;
    auto consider = [&](const Event& e) {
      if (best.type == EvType::none || (up ? e.key < best.key : best.key < e.key)) best = e;
    };
    for (int e : {x - 1, x}) {
      if (!d_.has_edge(e)) continue;
      const auto& v = cfg_.on_edge(e);
      if (v.empty()) continue;
      if (up) {
        // first link with (t,0) > k
        auto it = std::upper_bound(v.begin(), v.end(), k,
                                   [](const Key& kk, const EdgeLink& a) { return kk < Key{a.t, 0}; });
        if (it != v.end()) consider(Event{EvType::link, Key{it->t, 0}, e, it->kind, -1});
      } else {
        auto it = std::lower_bound(v.begin(), v.end(), k,
                                   [](const EdgeLink& a, const Key& kk) { return Key{a.t, 0} < kk; });
        if (it != v.begin()) {
          --it;
          consider(Event{EvType::link, Key{it->t, 0}, e, it->kind, -1});
        }
      }
    }
    for (int i = 0; i < static_cast<int>(markers_.size()); ++i) {
      const auto& m = markers_[i];
      if (m.site != x) continue;
      const Key mk{m.t, m.rank};
      if (up ? k < mk : mk < k) consider(Event{EvType::marker, mk, 0, LinkKind::bar, i});
    }
    return best;
  }

  Event wrap(int x, bool up) const {
    const Key edge_key = up ? Key{-1e300, 0} : Key{1e300, 0};
    return next(x, edge_key, up);
  }

  // Walk the loop through marker `start`, calling visit(marker index, arrived_up) for
  // every marker met (the start marker is reported last, when the loop closes).
  template <class F>
  void walk(int start, F&& visit) const {
    int x = markers_[start].site;
    Key k{markers_[start].t, markers_[start].rank};
    bool up = true;
    for (;;) {
      Event ev = next(x, k, up);
      if (ev.type == EvType::none) {
        if (d_.periodic()) {
          ev = wrap(x, up);
          if (ev.type == EvType::none) throw std::logic_error("walker: empty site circle");
        } else {
          ev.type = EvType::boundary;
        }
      }
      switch (ev.type) {
        case EvType::marker:
          visit(ev.marker, up);
          if (ev.marker == start) return;
          k = ev.key;
          break;
        case EvType::link: {
          const int y = (ev.edge == x) ? x + 1 : x - 1;
          if (ev.kind == LinkKind::bar) up = !up;
          x = y;
          k = ev.key;
          break;
        }
        case EvType::boundary:
          x = d_.boundary_partner(x);
          k = up ? Key{d_.t_hi(), 0} : Key{d_.t_lo(), 0};
          up = !up;
          break;
        case EvType::none:
          break;
      }
    }
  }

 private:
  const LinkConfig& cfg_;
  const Domain& d_;
  std::span<const Marker> markers_;
};

int loops_through_pair(const LinkConfig& cfg, const Domain& d, const Marker& a, const Marker& b) {
  const Marker ms[2] = {a, b};
  bool seen = false;
  Walker w(cfg, d, ms);
  w.walk(0, [&](int i, bool) { if (i == 1) seen = true; });
  return seen ? 1 : 2;
}

void check_no_tie(const LinkConfig& cfg, const Domain& d, int edge, double t) {
  for (int e : {edge - 1, edge + 1}) {
    if (!d.has_edge(e)) continue;
    if (cfg.find(e, t) != LinkConfig::npos)
      throw std::invalid_argument("move time coincides with a link on a neighbouring edge");
  }
}

}  // namespace

std::vector<bool> markers_on_loop(const LinkConfig& cfg, const Domain& d, std::span<const Marker> markers) {
  std::vector<bool> seen(markers.size(), false);
  if (markers.empty()) return seen;
  Walker w(cfg, d, markers);
  w.walk(0, [&](int i, bool) { seen[i] = true; });
  return seen;
}

int apply_and_delta(LinkConfig& cfg, const Domain& d, const Move& m) {
  validate_move(cfg, d, m);
  if (auto* ins = std::get_if<InsertMove>(&m)) {
    const auto& l = ins->link;
    check_no_tie(cfg, d, l.edge, l.t);
    const int before = loops_through_pair(cfg, d, Marker{l.edge, l.t, 0}, Marker{l.edge + 1, l.t, 0});
    cfg.insert(l);
    const int after = loops_through_pair(cfg, d, Marker{l.edge, l.t, -1}, Marker{l.edge, l.t, 1});
    return after - before;
  }
  if (auto* del = std::get_if<DeleteMove>(&m)) {
    const Link l = cfg.at(del->index);
    const int before = loops_through_pair(cfg, d, Marker{l.edge, l.t, -1}, Marker{l.edge, l.t, 1});
    cfg.erase(del->index);
    const int after = loops_through_pair(cfg, d, Marker{l.edge, l.t, 0}, Marker{l.edge + 1, l.t, 0});
    return after - before;
  }
  const auto& fl = std::get<FlipMove>(m);
  const Link l = cfg.at(fl.index);
  const int before = loops_through_pair(cfg, d, Marker{l.edge, l.t, -1}, Marker{l.edge, l.t, 1});
  cfg.flip(fl.index);
  const int after = loops_through_pair(cfg, d, Marker{l.edge, l.t, -1}, Marker{l.edge, l.t, 1});
  return after - before;
}

int delta_loops(const LinkConfig& cfg, const Domain& d, const Move& m) {
  LinkConfig copy = cfg;
  return apply_and_delta(copy, d, m);
}

bool collides_with_link(const LinkConfig& cfg, const Domain& d, const SitePoint& p) {
  for (int e : {p.site - 1, p.site})
    if (d.has_edge(e) && cfg.find(e, p.t) != LinkConfig::npos) return true;
  return false;
}

Pairing pairing_at(const LinkConfig& cfg, const Domain& d, std::span<const SitePoint> X) {
  const int k = static_cast<int>(X.size());
  std::vector<Marker> ms;
  ms.reserve(k);
  for (int i = 0; i < k; ++i) {
    const auto& p = X[i];
    if (!d.has_site(p.site)) throw std::invalid_argument("pairing_at: site outside domain");
    const bool inside = d.periodic() ? (p.t >= d.t_lo() && p.t < d.t_hi()) : (p.t > d.t_lo() && p.t < d.t_hi());
    if (!inside) throw std::invalid_argument("pairing_at: time outside domain");
    if (collides_with_link(cfg, d, p)) throw std::invalid_argument("pairing_at: point collides with a link");
    for (int j = 0; j < i; ++j)
      if (X[j].site == p.site && X[j].t == p.t) throw std::invalid_argument("pairing_at: repeated point");
    ms.push_back(Marker{p.site, p.t, 0});
  }
  Pairing out;
  out.partner.assign(2 * k, -1);
  std::vector<bool> on_counted_loop(k, false);
  Walker w(cfg, d, ms);
  for (int i = 0; i < k; ++i) {
    if (on_counted_loop[i]) continue;
    ++out.ell_through;
    // Walk the whole loop upward from marker i; consecutive markers along the loop are paired.
    std::vector<std::pair<int, bool>> seq;  // (marker, arrived going up)
    w.walk(i, [&](int j, bool up) { seq.push_back({j, up}); });
    for (const auto& [j, up] : seq) on_counted_loop[j] = true;
    // Leaving marker i upward starts at i^+; arriving at j going up reaches j^-, going down j^+.
    int from = 2 * i + 1;
    for (const auto& [j, up] : seq) {
      const int reached = up ? 2 * j : 2 * j + 1;
      out.partner[from] = reached;
      out.partner[reached] = from;
      from = up ? 2 * j + 1 : 2 * j;
    }
  }
  return out;
}

}  // namespace qloops
