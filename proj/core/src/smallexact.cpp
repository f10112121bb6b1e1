#include "qloops/smallexact.hpp"

#include <cmath>
#include <stdexcept>

#include "qloops/linkconfig.hpp"
#include "qloops/loops.hpp"

namespace qloops {

namespace {

struct Choice {
  int edge;
  LinkKind kind;
  double weight;
};

std::vector<Choice> choices(const Domain& d, double u) {
  std::vector<Choice> out;
  for (int e = d.edge_min(); e <= d.edge_max(); ++e) {
    if (u > 0.0) out.push_back({e, LinkKind::cross, u});
    if (u < 1.0) out.push_back({e, LinkKind::bar, 1.0 - u});
  }
  return out;
}

double sequences_up_to(const Domain& d, int K) {
  double total = 0.0, term = 1.0;
  for (int k = 0; k <= K; ++k) {
    total += term;
    term *= 2.0 * d.n_edges();
  }
  return total;
}

void check_budget(const Domain& d, int K) {
  if (K < 0) throw std::invalid_argument("series: K must be non-negative");
  const double total = sequences_up_to(d, K);
  if (total > kSeriesBudget)
    throw std::invalid_argument("series: enumeration budget exceeded (" + std::to_string(total) + " sequences)");
}

// Calls f(k, weight, ell) for every time-ordered sequence of k links, k <= K. The weight
// is the product of type weights; links sit at evenly spaced times since only their
// order matters.
template <class F>
void enumerate(const Domain& d, double u, int K, F&& f) {
  const auto ch = choices(d, u);
  const int m = static_cast<int>(ch.size());
  for (int k = 0; k <= K; ++k) {
    if (k > 0 && m == 0) break;
    std::vector<int> idx(k, 0);
    while (true) {
      LinkConfig cfg(d);
      double w = 1.0;
      for (int i = 0; i < k; ++i) {
        const Choice& c = ch[idx[i]];
        cfg.insert(Link{c.edge, d.t_lo() + (i + 0.5) * d.beta / k, c.kind});
        w *= c.weight;
      }
      f(k, w, count_loops(cfg, d));
      int pos = k - 1;
      while (pos >= 0 && ++idx[pos] == m) idx[pos--] = 0;
      if (pos < 0) break;
    }
  }
}

double poisson_upper_tail(double mean, int K) {
  // sum_{k>K} mean^k/k!, accumulated until the terms are negligible
  double term = 1.0;
  for (int k = 1; k <= K + 1; ++k) term *= mean / k;
  double s = 0.0;
  for (int k = K + 1; k < K + 10000; ++k) {
    s += term;
    if (term < 1e-300 || (k > mean && term < 1e-18 * s)) break;
    term *= mean / (k + 1);
  }
  return s;
}

}  // namespace

int max_series_order(const Domain& d) {
  int K = 0;
  while (sequences_up_to(d, K + 1) <= kSeriesBudget) ++K;
  return K;
}

SeriesResult partition_series(const Domain& d, double u, double n, int K) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("series: u must lie in [0,1]");
  if (!(n > 0.0)) throw std::invalid_argument("series: n must be positive");
  check_budget(d, K);
  SeriesResult r;
  r.K = K;
  r.per_k.assign(K + 1, 0.0);
  const double pre = std::exp(-d.nu());
  std::vector<double> scale(K + 1);
  double f = 1.0;
  for (int k = 0; k <= K; ++k) {
    scale[k] = pre * f;  // e^{-nu} beta^k / k!
    f *= d.beta / (k + 1);
  }
  enumerate(d, u, K, [&](int k, double w, int ell) { r.per_k[k] += scale[k] * w * std::pow(n, ell); });
  for (double v : r.per_k) r.value += v;
  const int ell0 = count_loops(LinkConfig(d), d);
  if (n >= 1.0)
    r.tail_bound = std::pow(n, ell0) * std::exp(-d.nu()) * poisson_upper_tail(d.nu() * n, K);
  else
    r.tail_bound = std::exp(-d.nu()) * poisson_upper_tail(d.nu(), K);
  return r;
}

double KLTable::total() const {
  double s = 0.0;
  for (const auto& [key, p] : prob) s += p;
  return s;
}

KLTable kl_distribution_series(const Domain& d, double u, double n, int K) {
  const SeriesResult z = partition_series(d, u, n, K);
  KLTable t;
  t.K = K;
  const double pre = std::exp(-d.nu());
  std::vector<double> scale(K + 1);
  double f = 1.0;
  for (int k = 0; k <= K; ++k) {
    scale[k] = pre * f;
    f *= d.beta / (k + 1);
  }
  enumerate(d, u, K, [&](int k, double w, int ell) {
    t.prob[{k, ell}] += scale[k] * w * std::pow(n, ell) / z.value;
  });
  // Normalized by the truncated sum Z_K, so P[k > K] = (Z - Z_K)/Z <= tail/Z_K.
  t.tail_mass_bound = z.tail_bound / z.value;
  return t;
}

}  // namespace qloops
