#include <benchmark/benchmark.h>

#include "qloops/mirror.hpp"

namespace {

using namespace qloops;

void BM_MirrorSweep(benchmark::State& st) {
  const int side = static_cast<int>(st.range(0));
  const MirrorLattice lat = MirrorLattice::brick(side, side, MirrorBoundary::black);
  MirrorParams p;
  p.n = 8;
  Rng rng = make_rng(3);
  MirrorConfig c = initial_config(lat);
  for (auto _ : st) mirror_sweep(lat, c, p, rng);
  st.counters["sites"] = lat.n_sites();
}
BENCHMARK(BM_MirrorSweep)->Arg(10)->Arg(40);

}  // namespace
