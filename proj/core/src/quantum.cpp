#include "qloops/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace qloops {

namespace {

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

int factor_of_site(const QuantumModel& m, int x) {
  const int f = x + m.L - 1;
  if (f < 0 || f >= m.n_sites()) throw std::invalid_argument("observable site " + std::to_string(x) + " outside the chain");
  return f;
}

// Scaled spectral function: V diag(exp(-s (lambda - lambda_0))) V^T v.
Eigen::VectorXd apply_exp(const QuantumModel& m, double s, const Eigen::VectorXd& v) {
  const double l0 = m.evals(0);
  Eigen::VectorXd c = m.evecs.transpose() * v;
  for (long i = 0; i < c.size(); ++i) c(i) *= std::exp(-s * (m.evals(i) - l0));
  return m.evecs * c;
}

Eigen::MatrixXd ground_projector(const QuantumModel& m) {
  const double l0 = m.evals(0);
  const double tol = 1e-9 * std::max(1.0, std::abs(l0));
  long g = 0;
  while (g < m.evals.size() && m.evals(g) - l0 <= tol) ++g;
  const auto Vg = m.evecs.leftCols(g);
  return Vg * Vg.transpose();
}

}  // namespace

QuantumModel build_general_model(int n, int L, double cT, double cQ, double c0) {
  if (n < 2) throw std::invalid_argument("quantum: n must be at least 2");
  if (L < 1) throw std::invalid_argument("quantum: L must be at least 1");
  const int ns = 2 * L;
  double dimd = 1.0;
  for (int i = 0; i < ns; ++i) dimd *= n;
  if (dimd > kMaxQuantumDim)
    throw std::invalid_argument("quantum: dimension n^(2L) = " + std::to_string(static_cast<long>(dimd)) +
                                " exceeds the guard " + std::to_string(kMaxQuantumDim));
  QuantumModel m;
  m.n = n;
  m.L = L;
  m.cT = cT;
  m.cQ = cQ;
  m.c0 = c0;
  const long dim = static_cast<long>(dimd);
  m.H = Eigen::MatrixXd::Zero(dim, dim);
  for (int f = 0; f + 1 < ns; ++f) {
    const long wa = ipow(n, ns - 1 - f), wb = ipow(n, ns - 2 - f);
    for (long s = 0; s < dim; ++s) {
      const int a = static_cast<int>((s / wa) % n), b = static_cast<int>((s / wb) % n);
      const long rest = s - a * wa - b * wb;
      // T: |a,b> -> |b,a>
      m.H(rest + b * wa + a * wb, s) -= cT;
      // Q: |a,a> -> (1/n) sum_c |c,c>
      if (a == b)
        for (int c = 0; c < n; ++c) m.H(rest + c * wa + c * wb, s) -= cQ / n;
      m.H(s, s) += c0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.H);
  if (es.info() != Eigen::Success) throw std::runtime_error("quantum: eigendecomposition failed");
  m.evals = es.eigenvalues();
  m.evecs = es.eigenvectors();
  return m;
}

QuantumModel build_model(int n, int L, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("quantum: u must lie in [0,1]");
  QuantumModel m = build_general_model(n, L, u, 1.0 - u, 0.0);
  m.u = u;
  return m;
}

QuantumModel build_loop_model(int n, int L, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("quantum: u must lie in [0,1]");
  QuantumModel m = build_general_model(n, L, u, (1.0 - u) * n, 1.0);
  m.u = u;
  return m;
}

LoopParams loop_params_for(int n, double u, double beta) {
  const double s = u * n + 1.0 - u;
  return LoopParams{u * n / s, beta * s / n};
}

std::vector<int> local_digits(int n, int k, int index) {
  std::vector<int> d(k);
  for (int i = k - 1; i >= 0; --i) {
    d[i] = index % n;
    index /= n;
  }
  return d;
}

int local_index(int n, const std::vector<int>& digits) {
  int r = 0;
  for (int c : digits) r = r * n + c;
  return r;
}

ObservableSpec identity_observable(int n) {
  (void)n;
  ObservableSpec o;
  o.M = Eigen::MatrixXd::Identity(1, 1);
  o.name = "I";
  return o;
}

ObservableSpec elementary_observable(int n, std::vector<int> sites, const std::vector<int>& i_minus,
                                     const std::vector<int>& i_plus) {
  const int k = static_cast<int>(sites.size());
  if (static_cast<int>(i_minus.size()) != k || static_cast<int>(i_plus.size()) != k)
    throw std::invalid_argument("elementary observable: color tuples must match the support size");
  for (int c : i_minus)
    if (c < 0 || c >= n) throw std::invalid_argument("elementary observable: color out of range");
  for (int c : i_plus)
    if (c < 0 || c >= n) throw std::invalid_argument("elementary observable: color out of range");
  ObservableSpec o;
  o.sites = std::move(sites);
  const int dl = static_cast<int>(ipow(n, k));
  o.M = Eigen::MatrixXd::Zero(dl, dl);
  o.M(local_index(n, i_minus), local_index(n, i_plus)) = 1.0;
  o.name = "E";
  return o;
}

ObservableSpec q_observable(int n, int x) {
  ObservableSpec o;
  o.sites = {x, x + 1};
  o.M = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) o.M(b * n + b, a * n + a) = 1.0 / n;
  o.name = "Q";
  return o;
}

ObservableSpec t_observable(int n, int x) {
  ObservableSpec o;
  o.sites = {x, x + 1};
  o.M = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) o.M(b * n + a, a * n + b) = 1.0;
  o.name = "T";
  return o;
}

double operator_norm(const ObservableSpec& obs) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(obs.M);
  return svd.singularValues()(0);
}

Eigen::VectorXd apply_observable(const QuantumModel& m, const ObservableSpec& obs, const Eigen::VectorXd& v) {
  const int k = obs.n_local();
  const long dl = ipow(m.n, k);
  if (obs.M.rows() != dl || obs.M.cols() != dl) throw std::invalid_argument("observable: coefficient size mismatch");
  std::vector<long> w(k);
  for (int i = 0; i < k; ++i) w[i] = ipow(m.n, m.n_sites() - 1 - factor_of_site(m, obs.sites[i]));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (long s = 0; s < v.size(); ++s) {
    if (v(s) == 0.0) continue;
    long b = 0, rest = s;
    for (int i = 0; i < k; ++i) {
      const long digit = (s / w[i]) % m.n;
      b = b * m.n + digit;
      rest -= digit * w[i];
    }
    for (long a = 0; a < dl; ++a) {
      const double c = obs.M(a, b);
      if (c == 0.0) continue;
      long target = rest, aa = a;
      for (int i = k - 1; i >= 0; --i) {
        target += (aa % m.n) * w[i];
        aa /= m.n;
      }
      out(target) += c * v(s);
    }
  }
  return out;
}

Eigen::MatrixXd observable_matrix(const QuantumModel& m, const ObservableSpec& obs) {
  Eigen::MatrixXd A(m.dim(), m.dim());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m.dim());
  for (long j = 0; j < m.dim(); ++j) {
    e(j) = 1.0;
    A.col(j) = apply_observable(m, obs, e);
    e(j) = 0.0;
  }
  return A;
}

double partition_function(const QuantumModel& m, double beta) {
  double z = 0.0;
  for (long i = 0; i < m.evals.size(); ++i) z += std::exp(-beta * m.evals(i));
  return z;
}

double gibbs_expectation(const QuantumModel& m, const ObservableSpec& obs, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("gibbs_expectation: beta must be positive");
  const double l0 = m.evals(0);
  double num = 0.0, z = 0.0;
  for (long i = 0; i < m.dim(); ++i) {
    const double w = std::exp(-beta * (m.evals(i) - l0));
    if (w < 1e-300) continue;
    const Eigen::VectorXd vi = m.evecs.col(i);
    num += w * vi.dot(apply_observable(m, obs, vi));
    z += w;
  }
  return num / z;
}

Eigen::VectorXd dimer_state(const QuantumModel& m) {
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(m.dim());
  const double amp = std::pow(1.0 / std::sqrt(static_cast<double>(m.n)), m.L);
  for (long s = 0; s < m.dim(); ++s) {
    bool ok = true;
    for (int p = 0; p < m.L && ok; ++p) {
      const long wa = ipow(m.n, m.n_sites() - 1 - 2 * p), wb = ipow(m.n, m.n_sites() - 2 - 2 * p);
      ok = (s / wa) % m.n == (s / wb) % m.n;
    }
    if (ok) psi(s) = amp;
  }
  return psi;
}

double seeded_expectation(const QuantumModel& m, const ObservableSpec& obs, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("seeded_expectation: beta must be non-negative");
  const Eigen::VectorXd phi = apply_exp(m, beta / 2.0, dimer_state(m));
  return phi.dot(apply_observable(m, obs, phi)) / phi.squaredNorm();
}

double gibbs_ground_expectation(const QuantumModel& m, const ObservableSpec& obs) {
  const Eigen::MatrixXd P = ground_projector(m);
  return (P * observable_matrix(m, obs)).trace() / P.trace();
}

double seeded_ground_expectation(const QuantumModel& m, const ObservableSpec& obs) {
  const Eigen::VectorXd phi = ground_projector(m) * dimer_state(m);
  if (phi.squaredNorm() < 1e-24) throw std::runtime_error("seeded ground limit: dimer state orthogonal to ground space");
  return phi.dot(apply_observable(m, obs, phi)) / phi.squaredNorm();
}

double truncated_correlation(const QuantumModel& m, const ObservableSpec& a, const ObservableSpec& b, double beta,
                             double t, StateKind state) {
  if (state == StateKind::gibbs) {
    if (!(beta > 0.0) || t < 0.0 || t >= beta)
      throw std::invalid_argument("truncated_correlation: need 0 <= t < beta");
    const Eigen::MatrixXd At = m.evecs.transpose() * observable_matrix(m, a) * m.evecs;
    const Eigen::MatrixXd Bt = m.evecs.transpose() * observable_matrix(m, b) * m.evecs;
    const double l0 = m.evals(0);
    const long dim = m.dim();
    Eigen::VectorXd wl(dim), wr(dim), w(dim);
    for (long i = 0; i < dim; ++i) {
      wl(i) = std::exp(-(beta - t) * (m.evals(i) - l0));
      wr(i) = std::exp(-t * (m.evals(i) - l0));
      w(i) = std::exp(-beta * (m.evals(i) - l0));
    }
    const double z = w.sum();
    double ab = 0.0, ea = 0.0, eb = 0.0;
    for (long i = 0; i < dim; ++i) {
      ea += w(i) * At(i, i);
      eb += w(i) * Bt(i, i);
      for (long j = 0; j < dim; ++j) ab += wl(i) * wr(j) * At(i, j) * Bt(j, i);
    }
    return ab / z - (ea / z) * (eb / z);
  }
  if (!(beta >= 0.0) || t < 0.0 || t > beta / 2.0)
    throw std::invalid_argument("truncated_correlation: seeded state needs 0 <= t <= beta/2");
  const Eigen::VectorXd psi = dimer_state(m);
  const Eigen::VectorXd left = apply_exp(m, beta / 2.0, psi);
  const double norm = left.squaredNorm();
  // <psi| e^{-bH/2} A e^{tH} B e^{-tH} e^{-bH/2} |psi>
  const Eigen::VectorXd right = apply_exp(m, beta / 2.0 + t, psi);
  const Eigen::VectorXd bt = apply_exp(m, -t, apply_observable(m, b, right));
  const double ea = left.dot(apply_observable(m, a, left)) / norm;
  const double eb = left.dot(bt) / norm;
  // A acts towards the bra, so apply its transpose to the left vector.
  ObservableSpec at = a;
  at.M = a.M.transpose();
  const double ab = apply_observable(m, at, left).dot(bt) / norm;
  return ab - ea * eb;
}

}  // namespace qloops
