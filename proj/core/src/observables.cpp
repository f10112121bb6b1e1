#include "qloops/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qloops/loops.hpp"

namespace qloops {

namespace {

int ipow(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

double loop_observable_at(const LinkConfig& cfg, const Domain& d, double n, const ObservableSpec& obs, double t) {
  const int k = obs.n_local();
  if (k > kMaxEstimatorSites)
    throw std::invalid_argument("loop estimator: support of " + std::to_string(k) + " sites exceeds " +
                                std::to_string(kMaxEstimatorSites));
  const int nc = static_cast<int>(std::lround(n));
  if (k == 0) return obs.M(0, 0);
  if (std::abs(n - nc) > 1e-12 || nc < 1) throw std::invalid_argument("loop estimator: n must be a positive integer");
  const int dl = ipow(nc, k);
  if (obs.M.rows() != dl || obs.M.cols() != dl) throw std::invalid_argument("loop estimator: coefficient size mismatch");
  std::vector<SitePoint> X;
  for (int x : obs.sites) {
    if (!d.has_site(x)) throw std::invalid_argument("loop estimator: observable site outside the domain");
    X.push_back(SitePoint{x, t});
  }
  const Pairing pi = pairing_at(cfg, d, X);
  const double weight = std::pow(n, -pi.ell_through);
  double value = 0.0;
  std::vector<int> color(2 * k);
  for (int a = 0; a < dl; ++a) {
    for (int b = 0; b < dl; ++b) {
      const double c = obs.M(a, b);
      if (c == 0.0) continue;
      int aa = a, bb = b;
      for (int i = k - 1; i >= 0; --i) {
        color[2 * i] = aa % nc;
        color[2 * i + 1] = bb % nc;
        aa /= nc;
        bb /= nc;
      }
      bool ok = true;
      for (int j = 0; j < 2 * k && ok; ++j) ok = color[j] == color[pi.partner[j]];
      if (ok) value += c * weight;
    }
  }
  return value;
}

std::vector<double> measurement_times(const Domain& d) {
  if (!d.periodic()) return {d.t_lo() + 0.5 * d.beta};
  std::vector<double> ts;
  for (int i = 0; i < 4; ++i) ts.push_back(d.t_lo() + (i + 0.5) * d.beta / 4.0);
  return ts;
}

double loop_observable_sample(const LinkConfig& cfg, const Domain& d, double n, const ObservableSpec& obs) {
  const auto ts = measurement_times(d);
  double s = 0.0;
  for (double t : ts) {
    for (int tries = 0;; ++tries) {
      bool hit = false;
      for (int x : obs.sites) hit = hit || collides_with_link(cfg, d, SitePoint{x, t});
      if (!hit) break;
      if (tries > 100) throw std::runtime_error("loop estimator: cannot find a free measurement time");
      t += 1e-7 * d.beta;
    }
    s += loop_observable_at(cfg, d, n, obs, t);
  }
  return s / static_cast<double>(ts.size());
}

EstimatorResult loop_estimator(std::span<const LinkConfig> samples, const Domain& d, double n,
                               const ObservableSpec& obs) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& c : samples) v.push_back(loop_observable_sample(c, d, n, obs));
  return estimate(v);
}

std::vector<Probe> dimer_probes(const Domain& d) {
  std::vector<Probe> out;
  const int half = d.L / 2;
  for (int e = std::max(d.edge_min(), -half); e <= std::min(d.edge_max(), half); ++e)
    for (int k = 0; k < 8; ++k) out.push_back(Probe{e, d.t_lo() + 0.25 * d.beta + (k + 0.5) * d.beta / 16.0});
  return out;
}

double dimer_sample(const LoopDecomposition& D, const Domain& d, const SimParams& p) {
  const auto tr = classify_trivial(D, p);
  std::vector<std::vector<std::pair<double, double>>> by_edge(d.n_edges());
  for (const auto& r : tr)
    if (r.small) by_edge[d.edge_index(r.edge)].push_back({r.t_lo, r.t_hi});
  double hit[2] = {0, 0}, tot[2] = {0, 0};
  for (const auto& pr : dimer_probes(d)) {
    const int par = edge_parity(pr.edge) == Parity::primal ? 0 : 1;
    tot[par] += 1.0;
    for (const auto& [lo, hi] : by_edge[d.edge_index(pr.edge)]) {
      if ((lo < pr.t && pr.t < hi) || (d.periodic() && lo < pr.t + d.beta && pr.t + d.beta < hi)) {
        hit[par] += 1.0;
        break;
      }
    }
  }
  const double rp = tot[0] > 0 ? hit[0] / tot[0] : 0.0;
  const double rd = tot[1] > 0 ? hit[1] / tot[1] : 0.0;
  return rp - rd;
}

double dimer_sample(const LinkConfig& cfg, const Domain& d, const SimParams& p) {
  return dimer_sample(trace_loops(cfg, d), d, p);
}

EstimatorResult dimer_order_parameter(std::span<const LinkConfig> samples, const Domain& d, const SimParams& p) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& c : samples) v.push_back(dimer_sample(c, d, p));
  return estimate(v);
}

TailFit tail_fit(std::span<const double> values, bool require_fit) {
  if (values.empty()) throw std::invalid_argument("tail_fit: no values");
  TailFit tf;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  const double N = static_cast<double>(sorted.size());
  const int G = hi > lo ? kTailGrid : 1;
  std::vector<double> xs, ys;
  for (int i = 0; i < G; ++i) {
    const double v = G == 1 ? lo : lo + (hi - lo) * i / (G - 1);
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), v);
    const double s = static_cast<double>(above) / N;
    tf.table.push_back(TailPoint{v, s});
    if (s >= 25.0 / N && s > 0.0) {
      xs.push_back(v);
      ys.push_back(std::log(s));
    }
  }
  tf.usable = static_cast<int>(xs.size());
  if (tf.usable >= 4) tf.fit = linear_fit(xs, ys);
  else if (require_fit)
    throw std::runtime_error("tail fit: only " + std::to_string(tf.usable) + " usable points (need 4)");
  return tf;
}

std::vector<double> perimeters(std::span<const LinkConfig> samples, const Domain& d, const SimParams& p, SitePoint x0) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& c : samples) v.push_back(boundary_component(c, d, p, x0).perimeter);
  return v;
}

TailFit perimeter_tail(std::span<const LinkConfig> samples, const Domain& d, const SimParams& p, SitePoint x0) {
  const auto v = perimeters(samples, d, p, x0);
  return tail_fit(v);
}

ObservableSpec translated(const ObservableSpec& b, int dx) {
  ObservableSpec o = b;
  for (int& x : o.sites) x += dx;
  return o;
}

ObservableSpec product(const ObservableSpec& a, const ObservableSpec& b) {
  for (int x : a.sites)
    if (std::find(b.sites.begin(), b.sites.end(), x) != b.sites.end())
      throw std::invalid_argument("product: overlapping supports");
  ObservableSpec o;
  o.sites = a.sites;
  o.sites.insert(o.sites.end(), b.sites.begin(), b.sites.end());
  const long ra = a.M.rows(), rb = b.M.rows();
  o.M = Eigen::MatrixXd::Zero(ra * rb, ra * rb);
  for (long i = 0; i < ra; ++i)
    for (long j = 0; j < ra; ++j)
      if (a.M(i, j) != 0.0) o.M.block(i * rb, j * rb, rb, rb) = a.M(i, j) * b.M;
  o.name = a.name + "*" + b.name;
  return o;
}

CorrelationDecay correlation_decay(std::span<const LinkConfig> samples, const Domain& d, double n,
                                   const ObservableSpec& a, const ObservableSpec& b, std::span<const int> separations) {
  CorrelationDecay out;
  std::vector<double> va;
  for (const auto& c : samples) va.push_back(loop_observable_sample(c, d, n, a));
  std::vector<double> xs, ys;
  for (int sep : separations) {
    const ObservableSpec bt = translated(b, sep);
    for (int x : bt.sites)
      if (!d.has_site(x)) throw std::invalid_argument("correlation_decay: translated observable leaves the domain");
    std::vector<double> vb, vab;
    bool same = false;
    for (int x : a.sites) same = same || std::find(bt.sites.begin(), bt.sites.end(), x) != bt.sites.end();
    ObservableSpec ab;
    if (same) {
      if (a.sites != bt.sites) throw std::invalid_argument("correlation_decay: partially overlapping supports");
      ab = bt;
      ab.M = a.M * bt.M;
    } else {
      ab = product(a, bt);
    }
    for (const auto& c : samples) {
      vb.push_back(loop_observable_sample(c, d, n, bt));
      vab.push_back(loop_observable_sample(c, d, n, ab));
    }
    const auto jk = jackknife_covariance(vab, va, vb);
    out.rows.push_back(CorrelationRow{sep, jk.value, jk.std_error});
    if (std::abs(jk.value) > 0.0) {
      xs.push_back(sep);
      ys.push_back(std::log(std::abs(jk.value)));
    }
  }
  if (xs.size() >= 2) out.fit = linear_fit(xs, ys);
  return out;
}

int window_count(const LinkConfig& cfg, const Window& w) {
  int c = 0;
  for (int e = w.edge_lo; e <= w.edge_hi; ++e) {
    if (!cfg.has_edge(e)) continue;
    for (const auto& l : cfg.on_edge(e))
      if (l.t >= w.t_lo && l.t < w.t_hi) ++c;
  }
  return c;
}

DominationReport domination_check(const std::vector<std::vector<int>>& counts, std::span<const Window> windows,
                                  double n) {
  if (counts.size() != windows.size()) throw std::invalid_argument("domination_check: one count series per window");
  DominationReport rep;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    WindowReport wr;
    wr.window = windows[w];
    const auto& c = counts[w];
    if (c.empty()) throw std::invalid_argument("domination_check: empty count series");
    const double N = static_cast<double>(c.size());
    std::vector<double> cd(c.begin(), c.end());
    const auto est = estimate(cd);
    wr.mean_count = est.mean;
    wr.n_eff = N / std::max(1.0, 2.0 * est.autocorrelation_time);
    const double mean = n * windows[w].size();
    const int kmax = std::max(1, poisson_quantile(mean, 0.999));
    std::vector<int> sorted(c.begin(), c.end());
    std::sort(sorted.begin(), sorted.end());
    for (int k = 1; k <= kmax; ++k) {
      DominationRow row;
      row.k = k;
      row.p_hat = static_cast<double>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), k)) / N;
      row.p_poisson = poisson_upper(mean, k);
      row.se = std::sqrt(std::max(row.p_poisson * (1.0 - row.p_poisson), 1.0 / N) / wr.n_eff);
      row.flagged = row.p_hat - row.p_poisson > 3.0 * row.se;
      wr.flagged = wr.flagged || row.flagged;
      wr.rows.push_back(row);
    }
    rep.flagged = rep.flagged || wr.flagged;
    rep.windows.push_back(std::move(wr));
  }
  return rep;
}

DominationReport domination_check(std::span<const LinkConfig> samples, std::span<const Window> windows, double n) {
  std::vector<std::vector<int>> counts(windows.size());
  for (const auto& s : samples)
    for (std::size_t w = 0; w < windows.size(); ++w) counts[w].push_back(window_count(s, windows[w]));
  return domination_check(counts, windows, n);
}

}  // namespace qloops
