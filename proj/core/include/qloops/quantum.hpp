#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qloops {

// Dense model on (C^n)^{2L}. Sites -L+1..L map to tensor factors 0..2L-1, factor 0 being
// the most significant digit of the basis index.
//
// H = -sum_edges [cT T + cQ Q - c0], with T|a,b> = |b,a> and Q = (1/n) sum |b,b><a,a|.
struct QuantumModel {
  int n = 2;
  int L = 1;
  double u = 0.5;
  double cT = 0.5;
  double cQ = 0.5;
  double c0 = 0.0;
  Eigen::MatrixXd H;
  Eigen::VectorXd evals;  // ascending
  Eigen::MatrixXd evecs;

  int n_sites() const { return 2 * L; }
  long dim() const { return static_cast<long>(H.rows()); }
};

constexpr long kMaxQuantumDim = 2000;

// H = -sum [u T + (1-u) Q].
QuantumModel build_model(int n, int L, double u);
// The Hamiltonian whose trace e^{-beta H} equals E_1[n^ell] for the loop measure with
// cross probability u: H = -sum [u T + (1-u) n Q - 1].
QuantumModel build_loop_model(int n, int L, double u);
QuantumModel build_general_model(int n, int L, double cT, double cQ, double c0);

// Loop parameters (u', beta') whose loop measure represents e^{-beta H} for
// H = -sum [u T + (1-u) Q]: u' = u n / (u n + 1 - u), beta' = beta (u n + 1 - u) / n.
struct LoopParams {
  double u;
  double beta;
};
LoopParams loop_params_for(int n, double u, double beta);

// A = sum_{a,b} M(a, b) |a><b| acting on `sites` (domain coordinates); a and b are
// multi-indices over the support with the first listed site most significant. Colors
// are 0-based.
struct ObservableSpec {
  std::vector<int> sites;
  Eigen::MatrixXd M;
  std::string name;
  int n_local() const { return static_cast<int>(sites.size()); }
};

ObservableSpec identity_observable(int n);
ObservableSpec elementary_observable(int n, std::vector<int> sites, const std::vector<int>& i_minus,
                                     const std::vector<int>& i_plus);
ObservableSpec q_observable(int n, int x);  // Q on sites x, x+1
ObservableSpec t_observable(int n, int x);  // T on sites x, x+1
double operator_norm(const ObservableSpec& obs);
// Multi-index of colors for a local index.
std::vector<int> local_digits(int n, int k, int index);
int local_index(int n, const std::vector<int>& digits);

// Applies the observable to a state vector of the model.
Eigen::VectorXd apply_observable(const QuantumModel& m, const ObservableSpec& obs, const Eigen::VectorXd& v);
Eigen::MatrixXd observable_matrix(const QuantumModel& m, const ObservableSpec& obs);

double partition_function(const QuantumModel& m, double beta);

double gibbs_expectation(const QuantumModel& m, const ObservableSpec& obs, double beta);
double seeded_expectation(const QuantumModel& m, const ObservableSpec& obs, double beta);
// beta -> infinity limits through the projector on the lowest eigenspace.
double gibbs_ground_expectation(const QuantumModel& m, const ObservableSpec& obs);
double seeded_ground_expectation(const QuantumModel& m, const ObservableSpec& obs);

// Product of dimers (1/sqrt n) sum_a |a,a> on the pairs (-L+1+2k, -L+2+2k).
Eigen::VectorXd dimer_state(const QuantumModel& m);

enum class StateKind { gibbs, seeded };
// <A; B(t)> with B(t) = e^{tH} B e^{-tH}; 0 <= t < beta for Gibbs, t <= beta/2 seeded.
double truncated_correlation(const QuantumModel& m, const ObservableSpec& a, const ObservableSpec& b, double beta,
                             double t, StateKind state = StateKind::gibbs);

}  // namespace qloops
