#include "qloops/render.hpp"

#include <cstdio>
#include <sstream>

namespace qloops {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const LinkConfig& cfg, const Domain& d, const ClusterReport* report, const RenderStyle& st) {
  const double W = d.n_sites() * st.unit + 2 * st.margin;
  const double H = d.beta * st.time_scale + 2 * st.margin;
  // site x sits at the centre of its unit strip; time grows upwards
  auto px = [&](double x) { return st.margin + (x - d.site_min() + 0.5) * st.unit; };
  auto py = [&](double t) { return st.margin + (d.t_hi() - t) * st.time_scale; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(W) << "\" height=\"" << num(H)
     << "\" viewBox=\"0 0 " << num(W) << " " << num(H) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << num(W) << "\" height=\"" << num(H) << "\" fill=\"white\"/>\n";
  os << "<g class=\"columns\">\n";
  for (int e = d.edge_min(); e <= d.edge_max(); ++e) {
    const bool primal = edge_parity(e) == Parity::primal;
    os << "<rect class=\"" << (primal ? "primal" : "dual") << "\" x=\"" << num(px(e)) << "\" y=\"" << num(py(d.t_hi()))
       << "\" width=\"" << num(st.unit) << "\" height=\"" << num(d.beta * st.time_scale) << "\" fill=\""
       << (primal ? "#d0d0d0" : "white") << "\"/>\n";
  }
  os << "</g>\n";

  if (report) {
    os << "<g class=\"clusters\">\n";
    for (const auto& c : report->clusters) {
      const bool primal = c.parity == Parity::primal;
      const char* colour = primal ? "#4caf50" : "#ff9800";
      for (int x = c.fill.site_min(); x <= c.fill.site_max(); ++x)
        for (const auto& sp : c.fill.on(x))
          os << "<rect class=\"" << (primal ? "cluster-primal" : "cluster-dual") << "\" x=\"" << num(px(x - 0.5))
             << "\" y=\"" << num(py(sp.hi)) << "\" width=\"" << num(st.unit) << "\" height=\""
             << num((sp.hi - sp.lo) * st.time_scale) << "\" fill=\"" << colour << "\" fill-opacity=\"0.5\"/>\n";
    }
    os << "</g>\n";
  }

  os << "<g class=\"sites\" stroke=\"black\" stroke-width=\"1\">\n";
  for (int x = d.site_min(); x <= d.site_max(); ++x)
    os << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(py(d.t_hi())) << "\" x2=\"" << num(px(x)) << "\" y2=\""
       << num(py(d.t_lo())) << "\"/>\n";
  os << "</g>\n";

  const double gap = 0.08 * st.unit;
  os << "<g class=\"links\" stroke=\"black\" stroke-width=\"2\" fill=\"none\">\n";
  for (const auto& l : cfg.links()) {
    const double x0 = px(l.edge), x1 = px(l.edge + 1), y = py(l.t);
    if (l.kind == LinkKind::bar) {
      os << "<path class=\"bar\" d=\"M" << num(x0) << " " << num(y - gap) << " H" << num(x1) << " M" << num(x0) << " "
         << num(y + gap) << " H" << num(x1) << "\"/>\n";
    } else {
      os << "<path class=\"cross\" d=\"M" << num(x0) << " " << num(y - gap) << " L" << num(x1) << " " << num(y + gap)
         << " M" << num(x0) << " " << num(y + gap) << " L" << num(x1) << " " << num(y - gap) << "\"/>\n";
    }
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace qloops
