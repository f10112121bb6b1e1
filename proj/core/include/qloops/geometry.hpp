#pragma once

#include <string>
#include <vector>

namespace qloops {

enum class Parity { primal, dual };
enum class DomainKind { torus, primal_rect, dual_rect };

// Edge connecting sites x_left and x_left + 1.
struct Edge {
  int x_left = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

Parity edge_parity(int x_left);
inline Parity edge_parity(Edge e) { return edge_parity(e.x_left); }
inline Parity opposite(Parity p) { return p == Parity::primal ? Parity::dual : Parity::primal; }

std::string to_string(DomainKind kind);
DomainKind parse_domain_kind(const std::string& s);  // torus | primal | dual (also primal-rect, dual-rect)

// Sites are {-L+1, ..., L}; edges are the nearest-neighbour pairs of that path.
// The torus has periodic time [0, beta); rectangles span (-beta/2, beta/2) with
// frozen pairings of boundary points on alternate edges.
struct Domain {
  DomainKind kind = DomainKind::torus;
  int L = 1;
  double beta = 1.0;
  double time_origin = 0.0;

  int site_min() const { return -L + 1; }
  int site_max() const { return L; }
  int n_sites() const { return 2 * L; }
  int edge_min() const { return -L + 1; }
  int edge_max() const { return L - 1; }
  int n_edges() const { return 2 * L - 1; }
  int site_index(int x) const { return x - site_min(); }
  int edge_index(int x_left) const { return x_left - edge_min(); }
  bool has_site(int x) const { return x >= site_min() && x <= site_max(); }
  bool has_edge(int x_left) const { return x_left >= edge_min() && x_left <= edge_max(); }

  bool periodic() const { return kind == DomainKind::torus; }
  double t_lo() const { return time_origin; }
  double t_hi() const { return time_origin + beta; }
  double nu() const { return n_edges() * beta; }

  // Parity of the edges carrying the frozen boundary pairings (rectangles only).
  Parity boundary_parity() const { return kind == DomainKind::dual_rect ? Parity::dual : Parity::primal; }
  bool is_boundary_edge(int x_left) const;
  // Site paired with x across the top and bottom boundary (rectangles only).
  int boundary_partner(int x) const;

  // Whether (edge, t) is an admissible link position.
  bool contains_link(int x_left, double t) const;
  double wrap_time(double t) const;

  double width() const { return 2.0 * L; }
  double perimeter() const { return 2.0 * width() + 2.0 * beta; }
};

Domain make_domain(DomainKind kind, int L, double beta);

// Blocks span the primal edge 2i, the dual edge 2i+1 and the sites 2i+1, 2i+2 between
// them; rows have height h/n and start at the bottom of the domain.
struct Block {
  int i = 0;
  int j = 0;
  Edge primal_edge;
  Edge dual_edge;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<int> sites;      // sites of the block that lie in the domain
  std::vector<int> edges;      // edges (x_left) of the block that lie in the domain
  std::vector<int> neighbours; // indices into the block list: up, down, left, right when present
};

struct BlockGrid {
  std::vector<Block> blocks;
  int n_cols = 0;
  int n_rows = 0;
  int i_min = 0;
  double height = 0.0;
  int index(int i, int j) const { return (i - i_min) * n_rows + j; }
  int block_column_of_site(int x) const;
  int block_column_of_edge(int x_left) const;
  int row_of_time(const Domain& d, double t) const;
};

BlockGrid enumerate_blocks(const Domain& d, double h, double n);

}  // namespace qloops
