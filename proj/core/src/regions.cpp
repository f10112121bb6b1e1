#include "qloops/regions.hpp"

#include <algorithm>
#include <stdexcept>

namespace qloops {

StripSet::StripSet(const Domain& d)
    : site_min_(d.site_min()), t_lo_(d.t_lo()), t_hi_(d.t_hi()), periodic_(d.periodic()), spans_(d.n_sites()) {}

void StripSet::insert_span(int site, double lo, double hi) {
  lo = std::max(lo, t_lo_);
  hi = std::min(hi, t_hi_);
  if (hi < lo) return;
  auto& v = spans_.at(site - site_min_);
  // spans closer than eps are joined: seam wrapping leaves ulp-sized gaps
  const double eps = 1e-12 * std::max(1.0, t_hi_ - t_lo_);
  auto it = std::lower_bound(v.begin(), v.end(), lo - eps, [](const Span& s, double x) { return s.hi < x; });
  // it: first span with hi >= lo - eps; absorb everything that touches [lo, hi]
  auto jt = it;
  while (jt != v.end() && jt->lo <= hi + eps) {
    lo = std::min(lo, jt->lo);
    hi = std::max(hi, jt->hi);
    ++jt;
  }
  it = v.erase(it, jt);
  v.insert(it, Span{lo, hi});
}

void StripSet::add(int site, double lo, double hi) {
  if (site < site_min() || site > site_max()) throw std::out_of_range("StripSet: site outside domain");
  if (hi < lo) throw std::invalid_argument("StripSet: span with hi < lo");
  if (periodic_) {
    const double beta = t_hi_ - t_lo_;
    if (hi - lo >= beta) {
      insert_span(site, t_lo_, t_hi_);
      return;
    }
    // bring lo into [t_lo, t_hi)
    while (lo >= t_hi_) { lo -= beta; hi -= beta; }
    while (lo < t_lo_) { lo += beta; hi += beta; }
    if (hi > t_hi_) {
      insert_span(site, lo, t_hi_);
      insert_span(site, t_lo_, hi - beta);
      return;
    }
  }
  insert_span(site, lo, hi);
}

void StripSet::add_all(const StripSet& o) {
  for (int x = o.site_min(); x <= o.site_max(); ++x)
    for (const auto& s : o.on(x)) insert_span(x, s.lo, s.hi);
}

bool StripSet::empty() const {
  for (const auto& v : spans_)
    if (!v.empty()) return false;
  return true;
}

double StripSet::measure(int site) const {
  double m = 0.0;
  for (const auto& s : on(site)) m += s.hi - s.lo;
  return m;
}

double StripSet::measure() const {
  double m = 0.0;
  for (int x = site_min(); x <= site_max(); ++x) m += measure(x);
  return m;
}

bool StripSet::contains(int site, double t) const {
  if (site < site_min() || site > site_max()) return false;
  for (const auto& s : on(site))
    if (s.lo <= t && t <= s.hi) return true;
  return false;
}

bool StripSet::contains_interior(int site, double t) const {
  if (site < site_min() || site > site_max()) return false;
  const auto& v = on(site);
  for (const auto& s : v)
    if (s.lo < t && t < s.hi) return true;
  if (periodic_ && (t == t_lo_ || t == t_hi_)) {
    bool below = false, above = false;
    for (const auto& s : v) {
      if (s.hi == t_hi_ && s.lo < t_hi_) below = true;
      if (s.lo == t_lo_ && s.hi > t_lo_) above = true;
    }
    return below && above;
  }
  return false;
}

double StripSet::covered_length(int site, double a, double b) const {
  if (site < site_min() || site > site_max()) return 0.0;
  double m = 0.0;
  for (const auto& s : on(site)) m += std::max(0.0, std::min(b, s.hi) - std::max(a, s.lo));
  return m;
}

double StripSet::union_measure(int site_a, int site_b) const {
  std::vector<Span> all;
  for (int x : {site_a, site_b})
    if (x >= site_min() && x <= site_max()) all.insert(all.end(), on(x).begin(), on(x).end());
  std::sort(all.begin(), all.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
  double m = 0.0, cur_lo = 0.0, cur_hi = 0.0;
  bool open = false;
  for (const auto& s : all) {
    if (open && s.lo <= cur_hi) {
      cur_hi = std::max(cur_hi, s.hi);
      continue;
    }
    if (open) m += cur_hi - cur_lo;
    cur_lo = s.lo;
    cur_hi = s.hi;
    open = true;
  }
  if (open) m += cur_hi - cur_lo;
  return m;
}

namespace {

// Union-find with integer winding offsets between lifts of pieces on the time circle.
class WindingDsu {
 public:
  explicit WindingDsu(int n) : parent_(n), off_(n, 0), flag_(n, false), wind_(n, false) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  std::pair<int, int> find(int a) {
    int o = 0, r = a;
    while (parent_[r] != r) {
      o += off_[r];
      r = parent_[r];
    }
    // path compression
    int cur = a, co = o;
    while (parent_[cur] != cur) {
      const int next = parent_[cur];
      const int next_off = co - off_[cur];
      parent_[cur] = r;
      off_[cur] = co;
      cur = next;
      co = next_off;
    }
    return {r, o};
  }
  // lift(b) - lift(a) = k
  void unite(int a, int b, int k) {
    auto [ra, oa] = find(a);
    auto [rb, ob] = find(b);
    if (ra == rb) {
      if (ob - oa != k) wind_[ra] = true;
      return;
    }
    parent_[rb] = ra;
    off_[rb] = k - ob + oa;
    flag_[ra] = flag_[ra] || flag_[rb];
    wind_[ra] = wind_[ra] || wind_[rb];
  }
  void mark(int a) { flag_[find(a).first] = true; }
  void mark_wind(int a) { wind_[find(a).first] = true; }
  bool flagged(int a) { return flag_[find(a).first]; }
  bool winds(int a) { return wind_[find(a).first]; }

 private:
  std::vector<int> parent_;
  std::vector<int> off_;
  std::vector<bool> flag_;  // reaches the outside
  std::vector<bool> wind_;  // winds around the time circle
};

std::vector<GapPiece> gaps_on(const StripSet& s, const Domain& d, int x) {
  std::vector<GapPiece> out;
  const auto& v = s.on(x);
  if (!d.periodic()) {
    double prev = d.t_lo();
    for (const auto& sp : v) {
      if (sp.lo > prev) out.push_back(GapPiece{x, prev, sp.lo, false, -1});
      prev = sp.hi;
    }
    if (prev < d.t_hi()) out.push_back(GapPiece{x, prev, d.t_hi(), false, -1});
    return out;
  }
  if (v.empty()) {
    out.push_back(GapPiece{x, d.t_lo(), d.t_hi(), true, -1});
    return out;
  }
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i + 1].lo > v[i].hi) out.push_back(GapPiece{x, v[i].hi, v[i + 1].lo, false, -1});
  double lo = v.back().hi, hi = v.front().lo + d.beta;
  if (hi > lo) {
    if (lo >= d.t_hi()) {
      lo -= d.beta;
      hi -= d.beta;
    }
    out.push_back(GapPiece{x, lo, hi, false, -1});
  }
  return out;
}

}  // namespace

GapComponents complement_components(const StripSet& s, const Domain& d) {
  GapComponents gc;
  std::vector<int> first(d.n_sites() + 1, 0);
  for (int x = d.site_min(); x <= d.site_max(); ++x) {
    auto g = gaps_on(s, d, x);
    first[d.site_index(x)] = static_cast<int>(gc.pieces.size());
    gc.pieces.insert(gc.pieces.end(), g.begin(), g.end());
  }
  first[d.n_sites()] = static_cast<int>(gc.pieces.size());
  const int np = static_cast<int>(gc.pieces.size());
  WindingDsu dsu(np);
  for (int i = 0; i < np; ++i) {
    const auto& p = gc.pieces[i];
    if (p.site == d.site_min() || p.site == d.site_max()) dsu.mark(i);
    if (p.full_circle) dsu.mark_wind(i);
    if (!d.periodic() && (p.lo <= d.t_lo() || p.hi >= d.t_hi())) dsu.mark(i);
  }
  for (int xi = 0; xi + 1 < d.n_sites(); ++xi) {
    for (int i = first[xi]; i < first[xi + 1]; ++i) {
      for (int j = first[xi + 1]; j < first[xi + 2]; ++j) {
        const auto& a = gc.pieces[i];
        const auto& b = gc.pieces[j];
        if (!d.periodic()) {
          if (std::min(a.hi, b.hi) > std::max(a.lo, b.lo)) dsu.unite(i, j, 0);
          continue;
        }
        for (int k = -1; k <= 1; ++k) {
          const double blo = b.lo + k * d.beta, bhi = b.hi + k * d.beta;
          if (std::min(a.hi, bhi) > std::max(a.lo, blo)) dsu.unite(i, j, k);
        }
      }
    }
  }
  std::vector<int> root_id(np, -1);
  for (int i = 0; i < np; ++i) {
    const int r = dsu.find(i).first;
    if (root_id[r] < 0) {
      root_id[r] = gc.n_components();
      gc.bounded.push_back(!dsu.flagged(r) && !dsu.winds(r));
      gc.winds.push_back(dsu.winds(r));
    }
    gc.pieces[i].comp = root_id[r];
  }
  return gc;
}

StripSet fill_holes(const StripSet& s, const Domain& d) {
  StripSet out = s;
  const GapComponents gc = complement_components(s, d);
  for (const auto& p : gc.pieces)
    if (gc.bounded[p.comp]) out.add(p.site, p.lo, p.hi);
  return out;
}

}  // namespace qloops
