#include <benchmark/benchmark.h>

#include "qloops/linkconfig.hpp"
#include "qloops/loops.hpp"

namespace {

using namespace qloops;

void BM_TraceLoops(benchmark::State& st) {
  const Domain d = make_domain(DomainKind::primal_rect, static_cast<int>(st.range(0)), 8.0);
  const LinkConfig cfg = sample_base(d, 0.5, 7);
  for (auto _ : st) benchmark::DoNotOptimize(count_loops(cfg, d));
  st.counters["links"] = static_cast<double>(cfg.size());
}
BENCHMARK(BM_TraceLoops)->Arg(3)->Arg(7)->Arg(15)->Arg(31);

void BM_DeltaLoops(benchmark::State& st) {
  const Domain d = make_domain(DomainKind::torus, static_cast<int>(st.range(0)), 8.0);
  const LinkConfig cfg = sample_base(d, 0.5, 11);
  std::size_t i = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(delta_loops(cfg, d, Move{FlipMove{i}}));
    i = (i + 1) % cfg.size();
  }
}
BENCHMARK(BM_DeltaLoops)->Arg(4)->Arg(16);

}  // namespace
