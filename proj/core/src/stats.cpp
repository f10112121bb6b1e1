#include "qloops/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

namespace qloops {

EstimatorResult estimate(std::span<const double> xs) {
  EstimatorResult r;
  r.n_samples = xs.size();
  if (xs.empty()) throw std::invalid_argument("estimate: empty sample");
  r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  std::vector<double> cur(xs.begin(), xs.end());
  std::size_t size = 1;
  double naive = 0.0;
  while (cur.size() >= kMinBins || size == 1) {
    const double m = std::accumulate(cur.begin(), cur.end(), 0.0) / static_cast<double>(cur.size());
    double v = 0.0;
    for (double x : cur) v += (x - m) * (x - m);
    const double nb = static_cast<double>(cur.size());
    const double se = nb > 1 ? std::sqrt(v / (nb - 1.0) / nb) : 0.0;
    r.bins.push_back(BinLevel{size, cur.size(), se});
    if (size == 1) naive = se;
    if (cur.size() < 2 * kMinBins) break;
    std::vector<double> next(cur.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = 0.5 * (cur[2 * i] + cur[2 * i + 1]);
    cur.swap(next);
    size *= 2;
  }
  for (const auto& b : r.bins)
    if (b.n_bins >= kMinBins || r.bins.size() == 1) r.std_error = std::max(r.std_error, b.std_error);
  r.autocorrelation_time = naive > 0 ? 0.5 * (r.std_error / naive) * (r.std_error / naive) : 0.5;
  return r;
}

JackknifeResult jackknife_covariance(std::span<const double> ab, std::span<const double> a,
                                     std::span<const double> b) {
  const std::size_t n = ab.size();
  if (a.size() != n || b.size() != n || n < kJackknifeBlocks)
    throw std::invalid_argument("jackknife: need equal series with at least as many samples as blocks");
  const std::size_t nb = kJackknifeBlocks;
  std::vector<double> sab(nb, 0.0), sa(nb, 0.0), sb(nb, 0.0), cnt(nb, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i * nb / n;
    sab[k] += ab[i];
    sa[k] += a[i];
    sb[k] += b[i];
    cnt[k] += 1.0;
  }
  const double Tab = std::accumulate(sab.begin(), sab.end(), 0.0), Ta = std::accumulate(sa.begin(), sa.end(), 0.0),
               Tb = std::accumulate(sb.begin(), sb.end(), 0.0), N = static_cast<double>(n);
  JackknifeResult r;
  r.value = Tab / N - (Ta / N) * (Tb / N);
  std::vector<double> est(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const double m = N - cnt[k];
    est[k] = (Tab - sab[k]) / m - ((Ta - sa[k]) / m) * ((Tb - sb[k]) / m);
  }
  const double mean = std::accumulate(est.begin(), est.end(), 0.0) / nb;
  double v = 0.0;
  for (double e : est) v += (e - mean) * (e - mean);
  r.std_error = std::sqrt(v * (nb - 1.0) / nb);
  return r;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need at least two points");
  LinearFit f;
  f.n = x.size();
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

double poisson_pmf(double mean, int k) {
  if (k < 0) return 0.0;
  if (mean <= 0.0) return k == 0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::poisson_distribution<>(mean), k);
}

double poisson_upper(double mean, int k) {
  if (k <= 0) return 1.0;
  if (mean <= 0.0) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::poisson_distribution<>(mean), k - 1));
}

int poisson_quantile(double mean, double q) {
  int k = 0;
  double c = poisson_pmf(mean, 0);
  while (c < q && k < 100000) c += poisson_pmf(mean, ++k);
  return k;
}

double chi_square_sf(double stat, double dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_sf: dof must be positive");
  if (stat <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<>(dof), stat));
}

ChiSquareResult chi_square_poisson(std::span<const int> counts, double mean) {
  if (counts.empty()) throw std::invalid_argument("chi_square_poisson: no counts");
  const double N = static_cast<double>(counts.size());
  int kmax = *std::max_element(counts.begin(), counts.end());
  kmax = std::max(kmax, poisson_quantile(mean, 0.999999));
  std::vector<double> obs(kmax + 1, 0.0), expct(kmax + 1, 0.0);
  for (int c : counts) obs[c] += 1.0;
  for (int k = 0; k <= kmax; ++k) expct[k] = N * poisson_pmf(mean, k);
  expct[kmax] = N * poisson_upper(mean, kmax);
  // merge cells from both ends until the expected counts reach 5
  std::vector<double> o, e;
  double ao = 0.0, ae = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    ao += obs[k];
    ae += expct[k];
    if (ae >= 5.0) {
      o.push_back(ao);
      e.push_back(ae);
      ao = ae = 0.0;
    }
  }
  if (ae > 0.0 || ao > 0.0) {
    if (e.empty()) {
      o.push_back(ao);
      e.push_back(ae);
    } else {
      o.back() += ao;
      e.back() += ae;
    }
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < o.size(); ++i) r.stat += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
  r.dof = static_cast<int>(o.size()) - 1;
  r.p_value = r.dof > 0 ? chi_square_sf(r.stat, r.dof) : 1.0;
  return r;
}

}  // namespace qloops
