#include <benchmark/benchmark.h>

#include "qloops/clusters.hpp"
#include "qloops/sampler.hpp"

namespace {

using namespace qloops;

void BM_BuildClusters(benchmark::State& st) {
  const Domain d = make_domain(DomainKind::primal_rect, static_cast<int>(st.range(0)), 8.0);
  SimParams p;
  p.n = 12;
  p.u = 0.5;
  p.kappa = 0.1;
  ChainState s = init_chain(d, 9);
  for (int i = 0; i < 200; ++i) mcmc_sweep(s, p, d);
  for (auto _ : st) benchmark::DoNotOptimize(build_clusters(s.cfg, d, p).clusters.size());
}
BENCHMARK(BM_BuildClusters)->Arg(3)->Arg(7);

}  // namespace
