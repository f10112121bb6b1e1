#pragma once

#include <vector>

#include "qloops/geometry.hpp"
#include "qloops/linkconfig.hpp"
#include "qloops/loops.hpp"
#include "qloops/regions.hpp"

namespace qloops {

// A loop through exactly two distinct bars on one edge (frozen boundary bars included).
// Its support is [edge - 1/2, edge + 3/2] x [t_lo, t_hi]; on the torus t_hi may pass
// the seam.
struct TrivialLoopRecord {
  int loop = -1;
  int edge = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  int bar_lo = -1;  // link ids in the decomposition
  int bar_hi = -1;
  Parity parity = Parity::primal;
  bool small = false;
  double height() const { return t_hi - t_lo; }
};

std::vector<TrivialLoopRecord> classify_trivial(const LoopDecomposition& D, const SimParams& p);
// loop id -> index into the record list, or -1
std::vector<int> trivial_index(const LoopDecomposition& D, const std::vector<TrivialLoopRecord>& tr);

// Components of the given trivial loops under support intersection, same parity only.
std::vector<std::vector<int>> support_components(const Domain& d, const std::vector<TrivialLoopRecord>& tr,
                                                 const std::vector<int>& members);

struct Cluster {
  Parity parity = Parity::primal;
  std::vector<int> loops;  // indices into the trivial-loop records
  StripSet support;        // union of the supports
  StripSet fill;           // support plus its holes
};

struct LinkInfo {
  bool out = false;       // some half faces the outside
  bool boundary = false;  // out and on the closure of a cluster
  bool covered = false;
  int cluster = -1;       // cluster whose closed fill contains the link
  bool exposed() const { return out && !covered; }
};

// Link labels and volumes of the outside of a family of filled clusters.
struct OutsideSummary {
  std::vector<LinkInfo> links;  // per decomposition link
  StripSet cluster_union;
  double vol = 0.0;   // length of the outside on site lines
  double vol1 = 0.0;  // length of the outside on the mid-lines of primal columns
  int n_out = 0;
  int n_boundary = 0;
  int n_covered = 0;
  int n_exposed = 0;
  int n_out_real = 0;
  int n_tall_outside = 0;
  std::vector<int> loops_outside;  // loops meeting the outside
};

OutsideSummary analyze_outside(const LoopDecomposition& D, const Domain& d, const std::vector<TrivialLoopRecord>& tr,
                               const std::vector<StripSet>& fills);

struct ClusterReport {
  Domain domain;
  SimParams params;
  LoopDecomposition decomp;
  std::vector<TrivialLoopRecord> trivial;
  std::vector<int> loop_trivial;
  std::vector<std::vector<int>> small_components[2];  // by parity: primal, dual
  std::vector<Cluster> clusters;                      // maximal filled components
  OutsideSummary outside;
};

ClusterReport build_clusters(const LinkConfig& cfg, const Domain& d, const SimParams& p);

// Parity of the small loops that make up the boundary component: the boundary parity of
// a rectangle, and on the torus the parity of the end edges.
Parity boundary_component_parity(const Domain& d);

struct BoundaryComponent {
  bool empty = true;  // x0 lies in the small-loop set around the boundary
  StripSet boundary_set;  // supports adjacent to the boundary, not filled
  StripSet region;        // the component of the complement containing x0
  bool wraps = false;
  double vertical = 0.0;
  int crossings = 0;  // horizontal crossings of boundary-parity columns, each of length 2
  int endpoints = 0;
  double perimeter = 0.0;
};

BoundaryComponent boundary_component(const LinkConfig& cfg, const Domain& d, const SimParams& p, SitePoint x0);

struct BlockOutside {
  BlockGrid grid;
  std::vector<int> blocks;  // indices into grid.blocks
  int n_links = 0;          // links of the configuration inside those blocks
  int m() const { return static_cast<int>(blocks.size()); }
};

BlockOutside block_outside(const ClusterReport& r, const LinkConfig& cfg);

}  // namespace qloops
