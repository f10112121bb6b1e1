#pragma once

#include <vector>

#include "qloops/geometry.hpp"

namespace qloops {

// Closed time interval. Stored spans lie inside [t_lo, t_hi]; on the torus a span that
// crosses the seam is split in two.
struct Span {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Span&, const Span&) = default;
};

// A region of the domain described by its intersection with the unit strips
// (x - 1/2, x + 1/2) around each site line, as sorted disjoint closed spans.
class StripSet {
 public:
  StripSet() = default;
  explicit StripSet(const Domain& d);

  // Adds [lo, hi] on a site strip. On the torus hi may exceed t_hi (the span wraps).
  void add(int site, double lo, double hi);
  void add_all(const StripSet& o);

  const std::vector<Span>& on(int site) const { return spans_[site - site_min_]; }
  int site_min() const { return site_min_; }
  int site_max() const { return site_min_ + static_cast<int>(spans_.size()) - 1; }
  bool empty() const;
  double measure(int site) const;
  double measure() const;
  bool contains(int site, double t) const;  // closed
  bool contains_interior(int site, double t) const;
  // Measure of the part of (a, b) covered on a strip.
  double covered_length(int site, double a, double b) const;
  // Union over two strips, measured on (t_lo, t_hi).
  double union_measure(int site_a, int site_b) const;

  friend bool operator==(const StripSet&, const StripSet&) = default;

 private:
  void insert_span(int site, double lo, double hi);
  int site_min_ = 0;
  double t_lo_ = 0.0;
  double t_hi_ = 0.0;
  bool periodic_ = false;
  std::vector<std::vector<Span>> spans_;
};

// Open maximal interval of a strip not covered by a region. On the torus hi may exceed
// t_hi when the gap crosses the seam; a strip with no spans gives one full-circle piece.
struct GapPiece {
  int site = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool full_circle = false;
  int comp = -1;
};

struct GapComponents {
  std::vector<GapPiece> pieces;
  // A component is bounded when it touches neither the left/right ends of the chain nor,
  // on a rectangle, the top or bottom, and on the torus does not wind around time.
  std::vector<bool> bounded;
  std::vector<bool> winds;  // torus: the component wraps around the time circle
  int n_components() const { return static_cast<int>(bounded.size()); }
};

// Connected components of the complement. Pieces in neighbouring strips connect when
// their open intervals overlap.
GapComponents complement_components(const StripSet& s, const Domain& d);

// Region plus the bounded components of its complement.
StripSet fill_holes(const StripSet& s, const Domain& d);

}  // namespace qloops
