#include "qloops/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qloops {

namespace {

constexpr int kDR[4] = {+1, +1, -1, -1};
constexpr int kDX[4] = {+1, -1, +1, -1};
// port across the shared diagonal: NE<->SW, NW<->SE
constexpr int kOpposite[4] = {3, 2, 1, 0};

// internal port pairs per state, ports 0:NE 1:NW 2:SE 3:SW
constexpr int kPair[3][4] = {
    {2, 3, 0, 1},  // v: right ports together, left ports together
    {1, 0, 3, 2},  // h: top together, bottom together
    {3, 2, 1, 0},  // empty: straight through
};

int partner_port(Mirror m, int port) { return kPair[static_cast<int>(m)][port]; }

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

Dsu port_dsu(const MirrorLattice& lat, const MirrorConfig& c) {
  const int N = lat.n_sites();
  Dsu dsu(4 * N);
  for (int s = 0; s < N; ++s) {
    for (int q = 0; q < 4; ++q) {
      const int pq = partner_port(c.state[s], q);
      if (pq > q) dsu.unite(4 * s + q, 4 * s + pq);
      const int t = lat.neighbour(s, q);
      if (t >= 0) dsu.unite(4 * s + q, 4 * t + kOpposite[q]);
    }
  }
  return dsu;
}

Mirror ring_state(MirrorBoundary b, int X) {
  const bool odd = (X % 2 + 2) % 2 == 1;
  if (b == MirrorBoundary::black) return odd ? Mirror::v : Mirror::h;
  return odd ? Mirror::h : Mirror::v;
}

}  // namespace

void MirrorParams::validate() const {
  for (double w : {p_v, p_h, p_empty})
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("mirror: weights must be finite and >= 0");
  if (std::abs(p_v + p_h + p_empty - 1.0) > 1e-9) throw std::invalid_argument("mirror: weights must sum to 1");
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("mirror: n must be positive");
}

double MirrorParams::weight(Mirror m) const {
  switch (m) {
    case Mirror::v:
      return p_v;
    case Mirror::h:
      return p_h;
    case Mirror::empty:
      return p_empty;
  }
  return 0.0;
}

MirrorParams rescaled_params(double u, double epsilon, double n) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("rescaled_params: u must lie in [0,1]");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("rescaled_params: epsilon must lie in (0,1]");
  MirrorParams p{1.0 - epsilon, (1.0 - u) * epsilon, u * epsilon, n};
  p.validate();
  return p;
}

MirrorLattice::MirrorLattice(int rows, int width, bool periodic_rows, MirrorBoundary boundary)
    : rows_(rows), width_(width), periodic_(periodic_rows), boundary_(boundary) {
  if (rows < 1 || width < 1) throw std::invalid_argument("mirror lattice: empty");
  if (periodic_rows && rows % 2 != 0) throw std::invalid_argument("mirror lattice: periodic rows need an even count");
  if (periodic_rows && (boundary == MirrorBoundary::black || boundary == MirrorBoundary::white))
    throw std::invalid_argument("mirror lattice: a ring needs open rows");
  index_.assign(static_cast<std::size_t>(rows) * width, -1);
  for (int R = 0; R < rows; ++R)
    for (int X = R % 2; X < width; X += 2) {
      index_[static_cast<std::size_t>(R) * width + X] = static_cast<int>(pos_.size());
      pos_.push_back({R, X});
    }
  const int N = n_sites();
  nbr_.assign(4 * N, -1);
  frozen_.assign(N, false);
  frozen_state_.assign(N, Mirror::v);
  for (int s = 0; s < N; ++s) {
    const auto [R, X] = pos_[s];
    for (int q = 0; q < 4; ++q) nbr_[4 * s + q] = site_at(R + kDR[q], X + kDX[q]);
    const bool first = X < 2, last = X + 2 >= width;
    if (boundary == MirrorBoundary::black || boundary == MirrorBoundary::white) {
      if (R == 0 || R == rows - 1 || first || last) {
        frozen_[s] = true;
        frozen_state_[s] = ring_state(boundary, X);
      }
    } else if (boundary == MirrorBoundary::walls) {
      if (X == 0 || X == width - 1) frozen_[s] = true;
    }
    if (!frozen_[s]) free_.push_back(s);
  }
}

MirrorLattice MirrorLattice::brick(int rows, int cols, MirrorBoundary boundary) {
  return MirrorLattice(rows, 2 * cols, false, boundary);
}

int MirrorLattice::site_at(int R, int X) const {
  if (X < 0 || X >= width_) return -1;
  if (periodic_) R = ((R % rows_) + rows_) % rows_;
  else if (R < 0 || R >= rows_) return -1;
  return index_[static_cast<std::size_t>(R) * width_ + X];
}

MirrorConfig initial_config(const MirrorLattice& lat, Mirror fill) {
  MirrorConfig c;
  c.state.resize(lat.n_sites());
  for (int s = 0; s < lat.n_sites(); ++s) c.state[s] = lat.frozen(s) ? lat.frozen_state(s) : fill;
  return c;
}

MirrorConfig random_config(const MirrorLattice& lat, const MirrorParams& p, Rng& rng) {
  p.validate();
  MirrorConfig c = initial_config(lat);
  for (int s : lat.free_sites()) {
    const double r = uniform01(rng);
    c.state[s] = r < p.p_v ? Mirror::v : (r < p.p_v + p.p_h ? Mirror::h : Mirror::empty);
  }
  return c;
}

int mirror_trace_loops(const MirrorLattice& lat, const MirrorConfig& c) {
  if (static_cast<int>(c.state.size()) != lat.n_sites()) throw std::invalid_argument("mirror: config size mismatch");
  Dsu dsu = port_dsu(lat, c);
  int roots = 0;
  for (int i = 0; i < 4 * lat.n_sites(); ++i) roots += dsu.find(i) == i;
  return roots;
}

std::array<int, 3> mirror_local_counts(const MirrorLattice& lat, const MirrorConfig& c, int s) {
  // Follow each port of s outwards until the strand comes back to s or leaves the box.
  int ext[4] = {-2, -2, -2, -2};
  for (int q = 0; q < 4; ++q) {
    if (ext[q] != -2) continue;  // resolved by the walk from its partner
    int site = s, port = q;
    ext[q] = -1;
    for (;;) {
      const int t = lat.neighbour(site, port);
      if (t < 0) break;
      const int in = kOpposite[port];
      if (t == s) {
        ext[q] = in;
        ext[in] = q;
        break;
      }
      site = t;
      port = partner_port(c.state[t], in);
    }
  }
  std::array<int, 3> out{};
  for (int m = 0; m < 3; ++m) {
    Dsu dsu(4);
    for (int q = 0; q < 4; ++q) {
      dsu.unite(q, kPair[m][q]);
      if (ext[q] >= 0) dsu.unite(q, ext[q]);
    }
    int roots = 0;
    for (int q = 0; q < 4; ++q) roots += dsu.find(q) == q;
    out[m] = roots;
  }
  return out;
}

void mirror_heatbath_step(const MirrorLattice& lat, MirrorConfig& c, const MirrorParams& p, int s, Rng& rng) {
  if (lat.frozen(s)) return;
  const auto loc = mirror_local_counts(lat, c, s);
  double w[3];
  const int base = std::min({loc[0], loc[1], loc[2]});
  for (int m = 0; m < 3; ++m) w[m] = p.weight(static_cast<Mirror>(m)) * std::pow(p.n, loc[m] - base);
  const double r = uniform01(rng) * (w[0] + w[1] + w[2]);
  c.state[s] = r < w[0] ? Mirror::v : (r < w[0] + w[1] ? Mirror::h : Mirror::empty);
}

void mirror_sweep(const MirrorLattice& lat, MirrorConfig& c, const MirrorParams& p, Rng& rng) {
  for (int s : lat.free_sites()) mirror_heatbath_step(lat, c, p, s, rng);
}

MirrorConfig config_from_index(const MirrorLattice& lat, long index) {
  MirrorConfig c = initial_config(lat);
  for (int s : lat.free_sites()) {
    c.state[s] = static_cast<Mirror>(index % 3);
    index /= 3;
  }
  return c;
}

std::vector<double> mirror_enumerate_exact(const MirrorLattice& lat, const MirrorParams& p) {
  p.validate();
  const int k = static_cast<int>(lat.free_sites().size());
  if (k > kMaxEnumeratedSites)
    throw std::invalid_argument("mirror enumeration: " + std::to_string(k) + " free sites exceeds " +
                                std::to_string(kMaxEnumeratedSites));
  long total = 1;
  for (int i = 0; i < k; ++i) total *= 3;
  std::vector<double> w(total);
  std::vector<int> ells(total);
  int ell_min = 1 << 30;
  for (long i = 0; i < total; ++i) {
    ells[i] = mirror_trace_loops(lat, config_from_index(lat, i));
    ell_min = std::min(ell_min, ells[i]);
  }
  double Z = 0.0;
  for (long i = 0; i < total; ++i) {
    double x = std::pow(p.n, ells[i] - ell_min);
    long j = i;
    for (int q = 0; q < k; ++q, j /= 3) x *= p.weight(static_cast<Mirror>(j % 3));
    w[i] = x;
    Z += x;
  }
  for (double& x : w) x /= Z;
  return w;
}

FaceOrder face_order(const MirrorLattice& lat, const MirrorConfig& c) {
  double hit[2] = {0, 0}, tot[2] = {0, 0};
  for (int R = 0; R < lat.rows(); ++R) {
    for (int X = (R + 1) % 2; X < lat.width(); X += 2) {
      const int top = lat.site_at(R + 1, X), bot = lat.site_at(R - 1, X);
      const int left = lat.site_at(R, X - 1), right = lat.site_at(R, X + 1);
      if (top < 0 || bot < 0 || left < 0 || right < 0) continue;
      if (lat.frozen(top) || lat.frozen(bot) || lat.frozen(left) || lat.frozen(right)) continue;
      const int col = R % 2 == 1 ? 0 : 1;  // 0 black
      tot[col] += 1;
      if (c.state[top] == Mirror::h && c.state[bot] == Mirror::h && c.state[left] == Mirror::v &&
          c.state[right] == Mirror::v)
        hit[col] += 1;
    }
  }
  return FaceOrder{tot[0] > 0 ? hit[0] / tot[0] : 0.0, tot[1] > 0 ? hit[1] / tot[1] : 0.0};
}

EstimatorResult black_white_order(const MirrorLattice& lat, const std::vector<MirrorConfig>& configs) {
  std::vector<double> v;
  v.reserve(configs.size());
  for (const auto& c : configs) v.push_back(face_order(lat, c).value());
  return estimate(v);
}

int mirror_trivial_loops(const MirrorLattice& lat, const MirrorConfig& c) {
  Dsu dsu = port_dsu(lat, c);
  struct Visits {
    int count = 0;
    int site[2] = {-1, -1};
    bool all_h = true;
  };
  std::vector<Visits> by_root(4 * lat.n_sites());
  for (int s = 0; s < lat.n_sites(); ++s) {
    if (c.state[s] == Mirror::v) continue;
    for (int q = 0; q < 4; ++q) {
      if (partner_port(c.state[s], q) < q) continue;
      auto& vis = by_root[dsu.find(4 * s + q)];
      if (vis.count < 2) vis.site[vis.count] = s;
      ++vis.count;
      vis.all_h = vis.all_h && c.state[s] == Mirror::h;
    }
  }
  // a path that runs off the box is never trivial
  std::vector<bool> open(4 * lat.n_sites(), false);
  for (int s = 0; s < lat.n_sites(); ++s)
    for (int q = 0; q < 4; ++q)
      if (lat.neighbour(s, q) < 0) open[dsu.find(4 * s + q)] = true;
  int n = 0;
  for (int root = 0; root < 4 * lat.n_sites(); ++root) {
    const Visits& vis = by_root[root];
    if (vis.count != 2 || !vis.all_h || open[root] || vis.site[0] == vis.site[1]) continue;
    if (lat.pos(vis.site[0])[1] == lat.pos(vis.site[1])[1]) ++n;
  }
  return n;
}

std::string to_string(MirrorBoundary b) {
  switch (b) {
    case MirrorBoundary::free:
      return "free";
    case MirrorBoundary::black:
      return "black";
    case MirrorBoundary::white:
      return "white";
    case MirrorBoundary::walls:
      return "walls";
  }
  return "free";
}

MirrorBoundary parse_mirror_boundary(const std::string& s) {
  if (s == "free") return MirrorBoundary::free;
  if (s == "black") return MirrorBoundary::black;
  if (s == "white") return MirrorBoundary::white;
  if (s == "walls") return MirrorBoundary::walls;
  throw std::invalid_argument("unknown mirror boundary '" + s + "' (free, black, white, walls)");
}

std::string mirror_to_text(const MirrorLattice& lat, const MirrorConfig& c) {
  std::ostringstream os;
  os << "# mirror rows=" << lat.rows() << " width=" << lat.width() << " periodic=" << (lat.periodic_rows() ? 1 : 0)
     << " boundary=" << to_string(lat.boundary()) << "\n";
  for (int R = 0; R < lat.rows(); ++R) {
    for (int X = R % 2; X < lat.width(); X += 2) {
      const Mirror m = c.state[lat.site_at(R, X)];
      os << (m == Mirror::v ? 'V' : m == Mirror::h ? 'H' : '.');
    }
    os << "\n";
  }
  return os.str();
}

MirrorConfig mirror_from_text(const MirrorLattice& lat, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  MirrorConfig c = initial_config(lat);
  int R = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (R >= lat.rows()) throw std::invalid_argument("mirror text: too many rows");
    int X = R % 2;
    for (char ch : line) {
      if (ch == ' ' || ch == '\r') continue;
      const int s = lat.site_at(R, X);
      if (s < 0) throw std::invalid_argument("mirror text: row " + std::to_string(R) + " too long");
      Mirror m;
      if (ch == 'V') m = Mirror::v;
      else if (ch == 'H') m = Mirror::h;
      else if (ch == '.') m = Mirror::empty;
      else throw std::invalid_argument(std::string("mirror text: bad symbol '") + ch + "'");
      if (lat.frozen(s) && m != lat.frozen_state(s))
        throw std::invalid_argument("mirror text: frozen site changed at row " + std::to_string(R));
      c.state[s] = m;
      X += 2;
    }
    if (X < lat.width()) throw std::invalid_argument("mirror text: row " + std::to_string(R) + " too short");
    ++R;
  }
  if (R != lat.rows()) throw std::invalid_argument("mirror text: expected " + std::to_string(lat.rows()) + " rows");
  return c;
}

}  // namespace qloops
