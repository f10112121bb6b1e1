#pragma once

#include <vector>

#include "qloops/clusters.hpp"

namespace qloops {

struct ClusterImage {
  Parity original = Parity::primal;  // dual clusters were moved one site to the left
  StripSet fill;
};

struct RepairOutput {
  LinkConfig omega_bar;
  std::vector<Link> eta_bar;  // images of the cluster-boundary links, sorted
  std::vector<ClusterImage> images;
  OutsideSummary outside_bar;       // outside of the images, labelled with the loops of omega_bar
  LoopDecomposition decomp_bar;

  int ell_before = 0;
  int ell_after = 0;
  int n_exposed_before = 0;
  int n_exposed_after = 0;
  int n_out_before = 0;
  double vol_before = 0.0;
  double vol_after = 0.0;
  double vol1_after = 0.0;
  int delta_ell() const { return ell_after - ell_before; }
};

// Shifts dual clusters and the outside links on dual edges one step left and turns the
// outside crosses into bars. Primal rectangles only. Throws std::runtime_error when two
// links land on the same position.
RepairOutput repair(const LinkConfig& cfg, const Domain& d, const SimParams& p);
RepairOutput repair(const ClusterReport& report);

// Checks the loop-gain, volume and triviality postconditions; throws std::logic_error
// naming the first one violated.
void check_repair(const RepairOutput& out, const Domain& d);

constexpr int kMaxPreimageOut = 12;

struct PreimageCount {
  long count = 0;
  long tried = 0;
  int n_out = 0;  // real links of the outside of the image
  bool contains_target = false;
};

// Exact number of configurations mapped to (omega_bar, eta_bar), by trying every
// shift/flip assignment on the real outside links and re-running the map. When target
// is given, also reports whether it is among the preimages.
PreimageCount count_preimages(const RepairOutput& out, const Domain& d, const SimParams& p,
                              const LinkConfig* target = nullptr);

}  // namespace qloops
