#include <gtest/gtest.h>

#include <cmath>

#include "qloops/quantum.hpp"
#include "qloops/smallexact.hpp"
#include "support/ed_oracle.hpp"

using namespace qloops;

namespace {

Eigen::MatrixXd local_op(const ObservableSpec& o, int n, int L) {
  // consecutive supports only
  return oracle::embed_local(o.M, n, 2 * L, o.sites.front() + L - 1, o.n_local());
}

}  // namespace

TEST(BuildModel, SwapSpectrum) {
  const QuantumModel m = build_model(2, 1, 1.0);
  ASSERT_EQ(m.evals.size(), 4);
  EXPECT_NEAR(m.evals(0), -1, 1e-12);
  EXPECT_NEAR(m.evals(1), -1, 1e-12);
  EXPECT_NEAR(m.evals(2), -1, 1e-12);
  EXPECT_NEAR(m.evals(3), 1, 1e-12);
}

TEST(BuildModel, ProjectorSpectrum) {
  const QuantumModel m = build_model(2, 1, 0.0);
  EXPECT_NEAR(m.evals(0), -1, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(m.evals(i), 0, 1e-12);
}

TEST(BuildModel, MatchesKroneckerAssembly) {
  for (int n : {2, 3})
    for (int L : {1, 2})
      for (double u : {0.0, 0.3, 1.0}) {
        const QuantumModel m = build_model(n, L, u);
        EXPECT_LT((m.H - oracle::hamiltonian(n, L, u, 1 - u, 0)).norm(), 1e-12);
        EXPECT_LT((m.H - m.H.transpose()).norm(), 1e-14);
        const QuantumModel l = build_loop_model(n, L, u);
        EXPECT_LT((l.H - oracle::hamiltonian(n, L, u, (1 - u) * n, 1)).norm(), 1e-12);
      }
}

TEST(BuildModel, DimensionGuard) {
  EXPECT_THROW(build_model(3, 4, 0.5), std::invalid_argument);
  EXPECT_THROW(build_model(1, 1, 0.5), std::invalid_argument);
  EXPECT_NO_THROW(build_model(6, 2, 0.5));
}

TEST(LoopParams, Mapping) {
  const LoopParams lp = loop_params_for(3, 0.5, 2.0);
  EXPECT_DOUBLE_EQ(lp.u, 0.75);
  EXPECT_DOUBLE_EQ(lp.beta, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(loop_params_for(2, 0.0, 1.0).u, 0.0);
  EXPECT_DOUBLE_EQ(loop_params_for(2, 0.0, 1.0).beta, 0.5);
  EXPECT_DOUBLE_EQ(loop_params_for(2, 1.0, 1.0).u, 1.0);
}

// The loop Hamiltonian is a positive multiple of the model Hamiltonian plus a constant.
TEST(LoopParams, HamiltonianRelation) {
  for (int n : {2, 3})
    for (double u : {0.0, 0.25, 0.5, 1.0}) {
      const double beta = 0.7;
      const LoopParams lp = loop_params_for(n, u, beta);
      const QuantumModel a = build_model(n, 1, u), b = build_loop_model(n, 1, lp.u);
      const auto Q = q_observable(n, 0);
      EXPECT_NEAR(gibbs_expectation(a, Q, beta), gibbs_expectation(b, Q, lp.beta), 1e-12);
    }
}

TEST(Gibbs, IdentityAndClosedForm) {
  const QuantumModel m = build_model(2, 1, 0.0);
  EXPECT_NEAR(gibbs_expectation(m, identity_observable(2), 1.3), 1.0, 1e-12);
  for (double beta : {0.1, 1.0, 4.0})
    EXPECT_NEAR(gibbs_expectation(m, q_observable(2, 0), beta), std::exp(beta) / (std::exp(beta) + 3), 1e-12);
  EXPECT_NEAR(gibbs_expectation(m, q_observable(2, 0), 1.0), 0.4753668864186717, 1e-12);
}

TEST(Gibbs, HighTemperatureLimit) {
  const QuantumModel m = build_model(3, 1, 0.4);
  const auto diag = elementary_observable(3, {0, 1}, {1, 2}, {1, 2});
  const auto off = elementary_observable(3, {0, 1}, {1, 2}, {2, 1});
  EXPECT_NEAR(gibbs_expectation(m, diag, 1e-7), 1.0 / 9, 1e-6);
  EXPECT_NEAR(gibbs_expectation(m, off, 1e-7), 0.0, 1e-6);
}

TEST(Gibbs, MatchesMatrixExponential) {
  for (int n : {2, 3})
    for (int L : {1, 2})
      for (double u : {0.0, 0.5, 1.0}) {
        const QuantumModel m = build_model(n, L, u);
        const Eigen::MatrixXd H = oracle::hamiltonian(n, L, u, 1 - u, 0);
        for (const auto& obs : {q_observable(n, 0), t_observable(n, 0), elementary_observable(n, {0, 1}, {0, 1}, {1, 0}),
                                elementary_observable(n, {1}, {1}, {1})}) {
          const Eigen::MatrixXd A = local_op(obs, n, L);
          EXPECT_NEAR(gibbs_expectation(m, obs, 1.0), oracle::thermal(H, A, 1.0), 1e-10);
          EXPECT_NEAR(seeded_expectation(m, obs, 1.0), oracle::seeded(H, A, oracle::dimers(n, L), 1.0), 1e-10);
        }
      }
}

// Value frozen from the Kronecker/Pade oracle.
TEST(Gibbs, FrozenElementaryValue) {
  const QuantumModel m = build_model(3, 2, 0.5);
  const auto obs = elementary_observable(3, {0, 1}, {1, 1}, {1, 1});
  const Eigen::MatrixXd H = oracle::hamiltonian(3, 2, 0.5, 0.5, 0);
  const double ref = oracle::thermal(H, local_op(obs, 3, 2), 1.0);
  EXPECT_NEAR(gibbs_expectation(m, obs, 1.0), ref, 1e-12);
  EXPECT_NEAR(ref, 0.15402186387173, 1e-9);
}

TEST(Gibbs, ColorRelabelingSymmetry) {
  const QuantumModel m = build_model(3, 1, 0.6);
  const int perm[3] = {2, 0, 1};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int e = 0; e < 3; ++e) {
          const auto o1 = elementary_observable(3, {0, 1}, {a, b}, {c, e});
          const auto o2 = elementary_observable(3, {0, 1}, {perm[a], perm[b]}, {perm[c], perm[e]});
          EXPECT_NEAR(gibbs_expectation(m, o1, 0.9), gibbs_expectation(m, o2, 0.9), 1e-12);
        }
}

TEST(Seeded, ZeroTemperatureStart) {
  const QuantumModel m = build_model(3, 1, 0.5);
  EXPECT_NEAR(seeded_expectation(m, q_observable(3, 0), 0.0), 1.0, 1e-12);
  EXPECT_NEAR(seeded_expectation(m, identity_observable(3), 0.0), 1.0, 1e-12);
}

TEST(Seeded, ConvergesToGroundLimit) {
  const QuantumModel m = build_model(2, 2, 0.5);
  const auto Q = q_observable(2, 0);
  const double lim = seeded_ground_expectation(m, Q);
  double prev = std::abs(seeded_expectation(m, Q, 1.0) - lim);
  for (double beta : {4.0, 16.0, 64.0}) {
    const double gap = std::abs(seeded_expectation(m, Q, beta) - lim);
    EXPECT_LE(gap, prev + 1e-12);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-8);
  EXPECT_NEAR(gibbs_expectation(m, Q, 80.0), gibbs_ground_expectation(m, Q), 1e-8);
}

TEST(DimerState, Normalised) {
  const QuantumModel m = build_model(3, 2, 0.5);
  const Eigen::VectorXd v = dimer_state(m);
  EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  EXPECT_LT((v - oracle::dimers(3, 2)).norm(), 1e-12);
}

TEST(TruncatedCorrelation, Examples) {
  const QuantumModel m = build_model(2, 2, 0.5);
  const auto A = q_observable(2, -1), B = t_observable(2, 1), I = identity_observable(2);
  for (double t : {0.0, 0.3, 0.9}) {
    EXPECT_NEAR(truncated_correlation(m, A, I, 2.0, t), 0.0, 1e-12);
    EXPECT_LE(std::abs(truncated_correlation(m, A, B, 2.0, t)), 2 * operator_norm(A) * operator_norm(B) + 1e-12);
    EXPECT_LE(std::abs(truncated_correlation(m, A, B, 2.0, t, StateKind::seeded)),
              2 * operator_norm(A) * operator_norm(B) + 1e-12);
  }
  EXPECT_GE(truncated_correlation(m, A, A, 2.0, 0.0), -1e-12);
  EXPECT_THROW(truncated_correlation(m, A, B, 2.0, 2.0), std::invalid_argument);
  EXPECT_THROW(truncated_correlation(m, A, B, 2.0, 1.5, StateKind::seeded), std::invalid_argument);
}

TEST(Observables, NormsAndIndices) {
  EXPECT_NEAR(operator_norm(q_observable(3, 0)), 1.0, 1e-12);
  EXPECT_NEAR(operator_norm(t_observable(3, 0)), 1.0, 1e-12);
  EXPECT_NEAR(operator_norm(elementary_observable(2, {0}, {0}, {1})), 1.0, 1e-12);
  EXPECT_EQ(local_index(3, local_digits(3, 3, 17)), 17);
  EXPECT_EQ(local_digits(2, 2, 2), (std::vector<int>{1, 0}));
  EXPECT_THROW(elementary_observable(2, {0}, {2}, {0}), std::invalid_argument);
}

TEST(PartitionFunction, MatchesTrace) {
  const QuantumModel m = build_loop_model(3, 1, 0.5);
  EXPECT_NEAR(partition_function(m, 0.4), oracle::trace_exp(oracle::hamiltonian(3, 1, 0.5, 1.5, 1), 0.4), 1e-10);
}
