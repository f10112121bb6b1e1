#include "qloops/repair.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qloops {

namespace {

bool link_less(const Link& a, const Link& b) {
  if (a.edge != b.edge) return a.edge < b.edge;
  return a.t < b.t;
}

StripSet shifted_left(const StripSet& s, const Domain& d) {
  StripSet out(d);
  for (int x = d.site_min(); x <= d.site_max(); ++x)
    for (const auto& sp : s.on(x)) {
      if (!d.has_site(x - 1)) throw std::runtime_error("repair: dual cluster leaves the domain");
      out.add(x - 1, sp.lo, sp.hi);
    }
  return out;
}

}  // namespace

RepairOutput repair(const ClusterReport& report) {
  const Domain& d = report.domain;
  if (d.kind != DomainKind::primal_rect) throw std::invalid_argument("repair: requires a primal rectangle");
  RepairOutput out;
  const auto& D = report.decomp;
  const auto& info = report.outside.links;
  out.ell_before = D.ell;
  out.n_exposed_before = report.outside.n_exposed;
  out.n_out_before = report.outside.n_out;
  out.vol_before = report.outside.vol;

  out.omega_bar = LinkConfig(d);
  for (std::size_t id = 0; id < D.n_real; ++id) {
    const DLink& l = D.links[id];
    const LinkInfo& li = info[id];
    Link img{l.edge, l.t, l.kind};
    if (li.cluster >= 0) {
      if (report.clusters[li.cluster].parity == Parity::dual) img.edge -= 1;
    } else {
      if (edge_parity(l.edge) == Parity::dual) img.edge -= 1;
      img.kind = LinkKind::bar;
    }
    if (!d.has_edge(img.edge)) throw std::runtime_error("repair: shifted link leaves the domain");
    if (out.omega_bar.find(img.edge, img.t) != LinkConfig::npos)
      throw std::runtime_error("repair: shift collision at edge " + std::to_string(img.edge));
    out.omega_bar.insert(img);
    if (li.boundary) out.eta_bar.push_back(img);
  }
  std::sort(out.eta_bar.begin(), out.eta_bar.end(), link_less);

  std::vector<StripSet> fills;
  for (const auto& c : report.clusters) {
    ClusterImage im;
    im.original = c.parity;
    im.fill = c.parity == Parity::dual ? shifted_left(c.fill, d) : c.fill;
    fills.push_back(im.fill);
    out.images.push_back(std::move(im));
  }
  out.decomp_bar = trace_loops(out.omega_bar, d);
  const auto tr_bar = classify_trivial(out.decomp_bar, report.params);
  out.outside_bar = analyze_outside(out.decomp_bar, d, tr_bar, fills);
  out.ell_after = out.decomp_bar.ell;
  out.n_exposed_after = out.outside_bar.n_exposed;
  out.vol_after = out.outside_bar.vol;
  out.vol1_after = out.outside_bar.vol1;
  return out;
}

RepairOutput repair(const LinkConfig& cfg, const Domain& d, const SimParams& p) {
  return repair(build_clusters(cfg, d, p));
}

void check_repair(const RepairOutput& out, const Domain& d) {
  const double tol = 1e-9 * std::max(1.0, d.beta * d.n_sites());
  if (4 * out.delta_ell() < out.n_exposed_before)
    throw std::logic_error("repair: loop gain " + std::to_string(out.delta_ell()) + " below a quarter of " +
                           std::to_string(out.n_exposed_before) + " exposed links");
  if (out.n_exposed_before < out.n_exposed_after)
    throw std::logic_error("repair: exposed links increased from " + std::to_string(out.n_exposed_before) + " to " +
                           std::to_string(out.n_exposed_after));
  if (out.vol1_after < 0.5 * out.vol_after - tol)
    throw std::logic_error("repair: primal outside volume below half the outside volume");
  if (out.vol_after < out.vol_before - tol) throw std::logic_error("repair: outside volume decreased");
  const auto tr = classify_trivial(out.decomp_bar, SimParams{});
  const auto idx = trivial_index(out.decomp_bar, tr);
  for (int li : out.outside_bar.loops_outside) {
    const int ti = idx[li];
    if (ti < 0 || tr[ti].parity != Parity::primal)
      throw std::logic_error("repair: a loop in the outside of the image is not a trivial primal loop");
  }
}

PreimageCount count_preimages(const RepairOutput& out, const Domain& d, const SimParams& p, const LinkConfig* target) {
  PreimageCount pc;
  const auto& D = out.decomp_bar;
  const auto& info = out.outside_bar.links;
  std::vector<int> out_ids, in_ids;
  for (std::size_t id = 0; id < D.n_real; ++id) {
    if (info[id].out) out_ids.push_back(static_cast<int>(id));
    else in_ids.push_back(static_cast<int>(id));
  }
  pc.n_out = static_cast<int>(out_ids.size());
  if (pc.n_out > kMaxPreimageOut)
    throw std::invalid_argument("count_preimages: " + std::to_string(pc.n_out) + " outside links exceed the guard " +
                                std::to_string(kMaxPreimageOut));
  const int nc = static_cast<int>(out.images.size());
  // Each image cluster inherits the shift bit of its boundary links.
  const long total = 1L << (2 * pc.n_out);
  std::vector<int> cluster_shift(nc);
  for (long bits = 0; bits < total; ++bits) {
    std::fill(cluster_shift.begin(), cluster_shift.end(), -1);
    bool consistent = true;
    for (int k = 0; k < pc.n_out && consistent; ++k) {
      const int c = info[out_ids[k]].cluster;
      if (c < 0) continue;
      const int s = static_cast<int>((bits >> (2 * k)) & 1);
      if (cluster_shift[c] < 0) cluster_shift[c] = s;
      else if (cluster_shift[c] != s) consistent = false;
    }
    if (!consistent) continue;
    LinkConfig cand(d);
    bool valid = true;
    auto place = [&](Link l) {
      if (!d.has_edge(l.edge) || cand.find(l.edge, l.t) != LinkConfig::npos) {
        valid = false;
        return;
      }
      cand.insert(l);
    };
    for (int k = 0; k < pc.n_out && valid; ++k) {
      const DLink& l = D.links[out_ids[k]];
      const bool shift = (bits >> (2 * k)) & 1;
      const bool flip = (bits >> (2 * k + 1)) & 1;
      LinkKind kind = l.kind;
      if (flip) kind = kind == LinkKind::bar ? LinkKind::cross : LinkKind::bar;
      place(Link{l.edge + (shift ? 1 : 0), l.t, kind});
    }
    for (std::size_t k = 0; k < in_ids.size() && valid; ++k) {
      const DLink& l = D.links[in_ids[k]];
      const int c = info[in_ids[k]].cluster;
      const bool shift = c >= 0 && cluster_shift[c] == 1;
      place(Link{l.edge + (shift ? 1 : 0), l.t, l.kind});
    }
    if (!valid) continue;
    ++pc.tried;
    RepairOutput again;
    try {
      again = repair(cand, d, p);
    } catch (const std::runtime_error&) {
      continue;
    }
    if (!(again.omega_bar == out.omega_bar) || again.eta_bar != out.eta_bar) continue;
    ++pc.count;
    if (target && cand == *target) pc.contains_target = true;
  }
  return pc;
}

}  // namespace qloops
