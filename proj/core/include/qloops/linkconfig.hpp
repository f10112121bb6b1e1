#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qloops/geometry.hpp"
#include "qloops/rng.hpp"

namespace qloops {

enum class LinkKind : std::uint8_t { cross, bar };

struct Link {
  int edge = 0;  // x_left
  double t = 0.0;
  LinkKind kind = LinkKind::bar;
  friend bool operator==(const Link&, const Link&) = default;
};

struct EdgeLink {
  double t = 0.0;
  LinkKind kind = LinkKind::bar;
  friend bool operator==(const EdgeLink&, const EdgeLink&) = default;
};

struct SimParams {
  double u = 0.5;
  double n = 1.0;
  double kappa = 0.0;
  double h = 1.0;

  // Height below which a trivial loop is small; infinite when kappa == 0.
  double small_cutoff() const;
  void validate() const;
};

// Configuration of links on the edges of a domain: per-edge arrays sorted by time.
// The global link index runs over edges left to right, then by time.
class LinkConfig {
 public:
  LinkConfig() = default;
  explicit LinkConfig(const Domain& d);

  int edge_min() const { return edge_min_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  bool has_edge(int x_left) const { return x_left >= edge_min_ && x_left < edge_min_ + n_edges(); }
  const std::vector<EdgeLink>& on_edge(int x_left) const { return edges_[x_left - edge_min_]; }
  std::vector<EdgeLink>& on_edge_mut(int x_left) { return edges_[x_left - edge_min_]; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  Link at(std::size_t index) const;
  // Global index of the link at (edge, position within edge).
  std::size_t global_index(int x_left, std::size_t pos) const;
  std::vector<Link> links() const;
  std::size_t count_kind(LinkKind k) const;

  // Position of a link with exactly this time on the edge, or npos.
  std::size_t find(int x_left, double t) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // In-place mutations; they throw std::invalid_argument / std::out_of_range on bad input.
  std::size_t insert(const Link& l);  // returns global index
  Link erase(std::size_t index);
  void flip(std::size_t index);

  friend bool operator==(const LinkConfig&, const LinkConfig&) = default;

 private:
  std::pair<int, std::size_t> locate(std::size_t index) const;
  int edge_min_ = 0;
  std::vector<std::vector<EdgeLink>> edges_;
  std::size_t count_ = 0;
};

struct InsertMove { Link link; };
struct DeleteMove { std::size_t index; };
struct FlipMove { std::size_t index; };
using Move = std::variant<InsertMove, DeleteMove, FlipMove>;

// Draw from the base process: crosses at rate u and bars at rate 1-u on every edge-column.
LinkConfig sample_base(const Domain& d, double u, std::uint64_t seed);
LinkConfig sample_base(const Domain& d, double u, Rng& rng);

LinkConfig apply_move(const LinkConfig& cfg, const Domain& d, const Move& m);
void apply_move_in_place(LinkConfig& cfg, const Domain& d, const Move& m);
void validate_move(const LinkConfig& cfg, const Domain& d, const Move& m);

// Text format: header "# loopcfg v1 kind=<torus|primal|dual> L=<int> beta=<float>"
// followed by one "x_left<TAB>t<TAB>X|B" line per link.
std::string serialize(const LinkConfig& cfg, const Domain& d);
struct ParsedConfig {
  Domain domain;
  LinkConfig cfg;
};
ParsedConfig deserialize(const std::string& text);
std::string format_time(double t);

}  // namespace qloops
