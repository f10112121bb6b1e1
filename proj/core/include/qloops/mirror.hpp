#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qloops/rng.hpp"
#include "qloops/stats.hpp"

namespace qloops {

enum class Mirror : std::uint8_t { v = 0, h = 1, empty = 2 };

struct MirrorParams {
  double p_v = 1.0 / 3;
  double p_h = 1.0 / 3;
  double p_empty = 1.0 / 3;
  double n = 1.0;
  void validate() const;
  double weight(Mirror m) const;
};

// p_empty = u eps, p_h = (1-u) eps, p_v = 1 - eps.
MirrorParams rescaled_params(double u, double epsilon, double n = 1.0);

// black/white: a frozen ring of outermost sites whose mirrors fit loops around black
// (white) faces only. walls: the first and last columns frozen to vertical mirrors.
enum class MirrorBoundary { free, black, white, walls };

// Sites are the points (R, X) of [0, H) x [0, W) with R + X even, i.e. the lattice turned
// by 45 degrees; rays run along the diagonals. Faces are the points with R + X odd and a
// face is black when R is odd. With periodic rows H must be even.
class MirrorLattice {
 public:
  MirrorLattice(int rows, int width, bool periodic_rows, MirrorBoundary boundary);
  // The rows x cols layout where site (r, c) sits at (r, 2c + r % 2).
  static MirrorLattice brick(int rows, int cols, MirrorBoundary boundary);

  int rows() const { return rows_; }
  int width() const { return width_; }
  bool periodic_rows() const { return periodic_; }
  MirrorBoundary boundary() const { return boundary_; }
  int n_sites() const { return static_cast<int>(pos_.size()); }
  int site_at(int R, int X) const;  // -1 when absent
  std::array<int, 2> pos(int s) const { return pos_[s]; }
  bool frozen(int s) const { return frozen_[s]; }
  Mirror frozen_state(int s) const { return frozen_state_[s]; }
  const std::vector<int>& free_sites() const { return free_; }
  // Neighbour across diagonal direction dir (0: +R+X, 1: +R-X, 2: -R+X, 3: -R-X), or -1.
  int neighbour(int s, int dir) const { return nbr_[4 * s + dir]; }

 private:
  int rows_, width_;
  bool periodic_;
  MirrorBoundary boundary_;
  std::vector<std::array<int, 2>> pos_;
  std::vector<int> index_;
  std::vector<int> nbr_;
  std::vector<bool> frozen_;
  std::vector<Mirror> frozen_state_;
  std::vector<int> free_;
};

struct MirrorConfig {
  std::vector<Mirror> state;  // per site
  friend bool operator==(const MirrorConfig&, const MirrorConfig&) = default;
};

MirrorConfig initial_config(const MirrorLattice& lat, Mirror fill = Mirror::v);
MirrorConfig random_config(const MirrorLattice& lat, const MirrorParams& p, Rng& rng);

// Loops plus paths through the lattice.
int mirror_trace_loops(const MirrorLattice& lat, const MirrorConfig& c);

// Number of loops or paths through site s for each of its three states, up to a common
// constant: ell(s = m) - ell(s = m') = local[m] - local[m'].
std::array<int, 3> mirror_local_counts(const MirrorLattice& lat, const MirrorConfig& c, int s);

void mirror_heatbath_step(const MirrorLattice& lat, MirrorConfig& c, const MirrorParams& p, int s, Rng& rng);
void mirror_sweep(const MirrorLattice& lat, MirrorConfig& c, const MirrorParams& p, Rng& rng);

constexpr int kMaxEnumeratedSites = 10;
// Exact law over the free sites; entry i has free site k in state (i / 3^k) % 3.
std::vector<double> mirror_enumerate_exact(const MirrorLattice& lat, const MirrorParams& p);
MirrorConfig config_from_index(const MirrorLattice& lat, long index);

// Fractions of black and white faces, with all four corners free, enclosed by a single
// loop (h mirrors above and below, v mirrors left and right).
struct FaceOrder {
  double black = 0.0;
  double white = 0.0;
  double value() const { return black - white; }
};
FaceOrder face_order(const MirrorLattice& lat, const MirrorConfig& c);
EstimatorResult black_white_order(const MirrorLattice& lat, const std::vector<MirrorConfig>& configs);

// Loops visiting exactly two non-v sites, both h and in the same column.
int mirror_trivial_loops(const MirrorLattice& lat, const MirrorConfig& c);

// Text grid: header line then one line per row listing the sites left to right with
// V, H or '.'.
std::string mirror_to_text(const MirrorLattice& lat, const MirrorConfig& c);
MirrorConfig mirror_from_text(const MirrorLattice& lat, const std::string& text);
std::string to_string(MirrorBoundary b);
MirrorBoundary parse_mirror_boundary(const std::string& s);

}  // namespace qloops
