#include "qloops/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qloops {

namespace {
int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
}  // namespace

Parity edge_parity(int x_left) {
  return (x_left % 2 == 0) ? Parity::primal : Parity::dual;
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::torus: return "torus";
    case DomainKind::primal_rect: return "primal";
    case DomainKind::dual_rect: return "dual";
  }
  return "torus";
}

DomainKind parse_domain_kind(const std::string& s) {
  if (s == "torus") return DomainKind::torus;
  if (s == "primal" || s == "primal-rect") return DomainKind::primal_rect;
  if (s == "dual" || s == "dual-rect") return DomainKind::dual_rect;
  throw std::invalid_argument("unknown domain kind '" + s + "' (expected torus, primal or dual)");
}

bool Domain::is_boundary_edge(int x_left) const {
  if (periodic() || !has_edge(x_left)) return false;
  return ((x_left - edge_min()) % 2) == 0;
}

int Domain::boundary_partner(int x) const {
  return ((x - site_min()) % 2 == 0) ? x + 1 : x - 1;
}

bool Domain::contains_link(int x_left, double t) const {
  if (!has_edge(x_left) || !std::isfinite(t)) return false;
  if (periodic()) return t >= t_lo() && t < t_hi();
  return t > t_lo() && t < t_hi();
}

double Domain::wrap_time(double t) const {
  if (!periodic()) return t;
  double r = std::fmod(t - t_lo(), beta);
  if (r < 0) r += beta;
  if (r >= beta) r = 0.0;
  return t_lo() + r;
}

Domain make_domain(DomainKind kind, int L, double beta) {
  if (L < 1) throw std::invalid_argument("L must be a positive integer");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive and finite");
  if (kind == DomainKind::primal_rect && L % 2 == 0)
    throw std::invalid_argument("primal rectangle requires odd L");
  if (kind == DomainKind::dual_rect && L % 2 != 0)
    throw std::invalid_argument("dual rectangle requires even L");
  Domain d;
  d.kind = kind;
  d.L = L;
  d.beta = beta;
  d.time_origin = (kind == DomainKind::torus) ? 0.0 : -beta / 2.0;
  return d;
}

int BlockGrid::block_column_of_site(int x) const { return floor_div(x - 1, 2); }
int BlockGrid::block_column_of_edge(int x_left) const { return floor_div(x_left, 2); }

int BlockGrid::row_of_time(const Domain& d, double t) const {
  int j = static_cast<int>(std::floor((t - d.t_lo()) / height));
  return std::clamp(j, 0, n_rows - 1);
}

BlockGrid enumerate_blocks(const Domain& d, double h, double n) {
  if (!(h > 0.0) || !(n > 0.0)) throw std::invalid_argument("block height requires h > 0 and n > 0");
  BlockGrid g;
  g.height = h / n;
  g.n_rows = std::max(1, static_cast<int>(std::ceil(d.beta / g.height - 1e-9)));
  g.i_min = g.block_column_of_site(d.site_min());
  const int i_max = g.block_column_of_site(d.site_max());
  g.n_cols = i_max - g.i_min + 1;
  g.blocks.reserve(static_cast<size_t>(g.n_cols) * g.n_rows);
  for (int i = g.i_min; i <= i_max; ++i) {
    for (int j = 0; j < g.n_rows; ++j) {
      Block b;
      b.i = i;
      b.j = j;
      b.primal_edge = Edge{2 * i};
      b.dual_edge = Edge{2 * i + 1};
      b.t_lo = d.t_lo() + j * g.height;
      b.t_hi = std::min(d.t_hi(), d.t_lo() + (j + 1) * g.height);
      for (int x : {2 * i + 1, 2 * i + 2})
        if (d.has_site(x)) b.sites.push_back(x);
      for (int e : {2 * i, 2 * i + 1})
        if (d.has_edge(e)) b.edges.push_back(e);
      g.blocks.push_back(std::move(b));
    }
  }
  for (auto& b : g.blocks) {
    auto add = [&](int i, int j) {
      if (i < g.i_min || i > i_max) return;
      if (d.periodic()) j = (j % g.n_rows + g.n_rows) % g.n_rows;
      if (j < 0 || j >= g.n_rows) return;
      int k = g.index(i, j);
      if (k == g.index(b.i, b.j)) return;
      if (std::find(b.neighbours.begin(), b.neighbours.end(), k) == b.neighbours.end())
        b.neighbours.push_back(k);
    };
    add(b.i, b.j + 1);
    add(b.i, b.j - 1);
    add(b.i - 1, b.j);
    add(b.i + 1, b.j);
  }
  return g;
}

}  // namespace qloops
