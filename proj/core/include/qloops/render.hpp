#pragma once

#include <string>

#include "qloops/clusters.hpp"
#include "qloops/geometry.hpp"
#include "qloops/linkconfig.hpp"

namespace qloops {

struct RenderStyle {
  double unit = 40.0;       // pixels per site spacing
  double time_scale = 40.0; // pixels per unit time
  double margin = 20.0;
};

// Grey primal columns, white dual columns, vertical site lines, a double-bar glyph for
// bars and an X for crosses. Cluster fills are shaded green (primal) or orange (dual)
// when a report is given. Output depends only on the inputs.
std::string render_svg(const LinkConfig& cfg, const Domain& d, const ClusterReport* report = nullptr,
                       const RenderStyle& style = {});

}  // namespace qloops
