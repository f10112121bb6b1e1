#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qloops/clusters.hpp"
#include "qloops/linkconfig.hpp"
#include "qloops/quantum.hpp"
#include "qloops/stats.hpp"

namespace qloops {

constexpr int kMaxEstimatorSites = 4;

// sum_{a,b} M(a,b) n^{-ell(pi)} 1{pi compatible with (a,b)} for the points of the
// observable support at time t. Throws when t collides with a link.
double loop_observable_at(const LinkConfig& cfg, const Domain& d, double n, const ObservableSpec& obs, double t);
// Per-sample value: average over 4 equally spaced times on the torus, the centre time
// on rectangles. A measurement time that collides with a link is moved slightly.
double loop_observable_sample(const LinkConfig& cfg, const Domain& d, double n, const ObservableSpec& obs);
std::vector<double> measurement_times(const Domain& d);

EstimatorResult loop_estimator(std::span<const LinkConfig> samples, const Domain& d, double n,
                               const ObservableSpec& obs);

// Order parameter: coverage of probe points (edge, time) by small trivial loops on the
// same edge, primal minus dual. Probes are 8 times in the central half of the time range
// on the edges of the central half of the chain.
struct Probe {
  int edge;
  double t;
};
std::vector<Probe> dimer_probes(const Domain& d);
double dimer_sample(const LinkConfig& cfg, const Domain& d, const SimParams& p);
double dimer_sample(const LoopDecomposition& D, const Domain& d, const SimParams& p);
EstimatorResult dimer_order_parameter(std::span<const LinkConfig> samples, const Domain& d, const SimParams& p);

struct TailPoint {
  double v;
  double survival;  // fraction of samples with value > v
};
struct TailFit {
  std::vector<TailPoint> table;
  std::optional<LinearFit> fit;  // log survival against v over points with survival >= 25/N
  int usable = 0;
};
constexpr int kTailGrid = 40;
// Survival table over kTailGrid points between the smallest and the largest value, and
// the log-linear fit. Throws std::runtime_error with fewer than 4 usable points when
// require_fit is set.
TailFit tail_fit(std::span<const double> values, bool require_fit = true);
std::vector<double> perimeters(std::span<const LinkConfig> samples, const Domain& d, const SimParams& p, SitePoint x0);
TailFit perimeter_tail(std::span<const LinkConfig> samples, const Domain& d, const SimParams& p, SitePoint x0);

// Observable B moved right by dx sites.
ObservableSpec translated(const ObservableSpec& b, int dx);
// Product of observables on disjoint supports.
ObservableSpec product(const ObservableSpec& a, const ObservableSpec& b);

struct CorrelationRow {
  int separation;
  double value;
  double std_error;
};
struct CorrelationDecay {
  std::vector<CorrelationRow> rows;
  std::optional<LinearFit> fit;  // log |value| against separation
  double rate() const { return fit ? -fit->slope : 0.0; }
};
CorrelationDecay correlation_decay(std::span<const LinkConfig> samples, const Domain& d, double n,
                                   const ObservableSpec& a, const ObservableSpec& b, std::span<const int> separations);

struct Window {
  int edge_lo = 0;
  int edge_hi = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double size() const { return (edge_hi - edge_lo + 1) * (t_hi - t_lo); }
};
int window_count(const LinkConfig& cfg, const Window& w);

struct DominationRow {
  int k;
  double p_hat;
  double p_poisson;
  double se;
  bool flagged;
};
struct WindowReport {
  Window window;
  double mean_count = 0.0;
  double n_eff = 0.0;
  std::vector<DominationRow> rows;
  bool flagged = false;
};
struct DominationReport {
  std::vector<WindowReport> windows;
  bool flagged = false;
};
// counts[w][s]: link count in window w for sample s. Flags k when the empirical tail
// P[count >= k] exceeds the Poisson(n |w|) tail by more than 3 standard errors, for k up
// to the 99.9% Poisson quantile.
DominationReport domination_check(const std::vector<std::vector<int>>& counts, std::span<const Window> windows,
                                  double n);
DominationReport domination_check(std::span<const LinkConfig> samples, std::span<const Window> windows, double n);

}  // namespace qloops
