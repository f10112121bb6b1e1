#include <benchmark/benchmark.h>

#include "qloops/sampler.hpp"

namespace {

using namespace qloops;

void BM_McmcSweep(benchmark::State& st) {
  const Domain d = make_domain(DomainKind::primal_rect, static_cast<int>(st.range(0)), 8.0);
  SimParams p;
  p.n = 3;
  p.u = 0.5;
  ChainState s = init_chain(d, 5);
  for (int i = 0; i < 50; ++i) mcmc_sweep(s, p, d);
  for (auto _ : st) mcmc_sweep(s, p, d);
  st.counters["links"] = static_cast<double>(s.cfg.size());
}
BENCHMARK(BM_McmcSweep)->Arg(3)->Arg(7)->Arg(15);

}  // namespace
