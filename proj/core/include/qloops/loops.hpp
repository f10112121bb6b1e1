#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qloops/geometry.hpp"
#include "qloops/linkconfig.hpp"

namespace qloops {

// A link as seen by the decomposition: the links of the configuration (global index
// order) followed by the frozen boundary bars of a rectangle.
struct DLink {
  int edge = 0;
  double t = 0.0;
  LinkKind kind = LinkKind::bar;
  bool boundary = false;
  bool top = false;  // boundary bars: top (true) or bottom (false) side
};

struct Interval {
  int site = 0;
  double t_lo = 0.0;  // on the torus t_hi may exceed t_lo + beta wrap; t_hi >= t_lo always
  double t_hi = 0.0;
  int below_link = -1;  // link id at the lower end, -1 for a full time circle
  int above_link = -1;
  int loop = -1;
};

// Passage through a link. half 0 is the passage containing the lower end at the left
// site (the lower half of a bar), half 1 the other one.
struct LinkVisit {
  int link = 0;
  int half = 0;
};

struct Loop {
  std::vector<int> intervals;
  std::vector<LinkVisit> visits;
  double length = 0.0;
};

struct LoopDecomposition {
  std::vector<DLink> links;
  std::size_t n_real = 0;
  std::vector<Interval> intervals;
  std::vector<Loop> loops;
  std::vector<std::array<int, 2>> half_loop;  // per link: loop through half 0 / half 1
  int ell = 0;
  double total_length() const;
};

LoopDecomposition trace_loops(const LinkConfig& cfg, const Domain& d);
int count_loops(const LinkConfig& cfg, const Domain& d);

// Point on a site line. rank orders it against a link at the same time on an incident
// edge: -1 just below, +1 just above, 0 for a point that is not at a link time.
struct Marker {
  int site = 0;
  double t = 0.0;
  int rank = 0;
};

// Walk the loop through markers[0] and report which markers it meets.
std::vector<bool> markers_on_loop(const LinkConfig& cfg, const Domain& d, std::span<const Marker> markers);

// Exact change of the loop count under a move, from the at most two loops through the
// move location.
int delta_loops(const LinkConfig& cfg, const Domain& d, const Move& m);
// Same, but leaves the move applied to cfg.
int apply_and_delta(LinkConfig& cfg, const Domain& d, const Move& m);

struct SitePoint {
  int site = 0;
  double t = 0.0;
};

// Pairing of the doubled points: entry 2i is (x_i, t_i^-), entry 2i+1 is (x_i, t_i^+).
struct Pairing {
  std::vector<int> partner;
  int ell_through = 0;
};

Pairing pairing_at(const LinkConfig& cfg, const Domain& d, std::span<const SitePoint> X);

// Whether a site point coincides with a link time on an incident edge.
bool collides_with_link(const LinkConfig& cfg, const Domain& d, const SitePoint& p);

}  // namespace qloops
