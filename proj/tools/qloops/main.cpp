#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace qloops;
using namespace qloops::cli;

int main(int argc, char** argv) {
  CLI::App app{"qloops: loop-model sampler and checks"};
  app.require_subcommand(1);

  Common sample_c, measure_c, repair_c, tail_c;
  auto* sample = app.add_subcommand("sample", "Run chains and write the sample stream (NDJSON)");
  add_common(sample, sample_c);
  auto* measure = app.add_subcommand("measure", "Run chains and report estimators (JSON)");
  add_common(measure, measure_c);
  auto* repair = app.add_subcommand("repair-audit", "Check the repair map on every sample (CSV)");
  add_common(repair, repair_c);
  auto* tail = app.add_subcommand("perimeter-tail", "Survival table and fit of the boundary perimeter (CSV)");
  add_common(tail, tail_c);

  EdArgs ed;
  auto* edc = app.add_subcommand("ed-check", "Compare a loop estimator with exact diagonalization");
  edc->add_option("--n", ed.n, "colors")->check(CLI::Range(1, 16));
  edc->add_option("--L", ed.L, "half length")->check(CLI::Range(1, 8));
  edc->add_option("--u", ed.u, "weight of T")->check(CLI::Range(0.0, 1.0));
  edc->add_option("--beta", ed.beta, "inverse temperature")->check(CLI::PositiveNumber);
  edc->add_option("--kind", ed.kind, "torus | primal | dual");
  edc->add_option("--observable", ed.observable, "Q | T");
  edc->add_option("--site", ed.site, "left site of the observable");
  edc->add_option("--sweeps", ed.sweeps);
  edc->add_option("--burnin", ed.burnin);
  edc->add_option("--seed", ed.seed);

  SeriesArgs se;
  auto* sec = app.add_subcommand("series-check", "Compare the trace with the small-beta series");
  sec->add_option("--n", se.n)->check(CLI::Range(1, 16));
  sec->add_option("--L", se.L)->check(CLI::Range(1, 8));
  sec->add_option("--u", se.u)->check(CLI::Range(0.0, 1.0));
  sec->add_option("--beta", se.beta)->check(CLI::PositiveNumber);
  sec->add_option("--K", se.K, "series order; default: largest within budget");

  MirrorArgs mi;
  auto* mic = app.add_subcommand("mirror", "Heat-bath sampling of the mirror model");
  mic->add_option("--rows", mi.rows)->check(CLI::Range(1, 100000));
  mic->add_option("--cols", mi.cols)->check(CLI::Range(1, 100000));
  mic->add_option("--boundary", mi.boundary, "free | black | white");
  mic->add_option("--n", mi.n)->check(CLI::PositiveNumber);
  mic->add_option("--pv", mi.p_v);
  mic->add_option("--ph", mi.p_h);
  mic->add_option("--pe", mi.p_empty);
  mic->add_option("--u", mi.u, "with --eps: rescaled weights");
  mic->add_option("--eps", mi.eps);
  mic->add_option("--sweeps", mi.sweeps);
  mic->add_option("--burnin", mi.burnin);
  mic->add_option("--seed", mi.seed);
  mic->add_flag("--exact", mi.exact, "also enumerate exactly (at most 10 free sites)");
  mic->add_option("--out", mi.out, "JSON report (default stdout)");
  mic->add_option("--dump", mi.dump, "write the last configuration as a text grid");

  RenderArgs re;
  auto* rec = app.add_subcommand("render", "Draw one sample as SVG");
  rec->add_option("--in", re.in, "sample stream")->required();
  rec->add_option("--index", re.index, "sample index")->check(CLI::NonNegativeNumber);
  rec->add_option("--out", re.out, "SVG file")->required();
  rec->add_flag("--clusters", re.clusters, "shade clusters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*sample) return run_sample(resolve(sample, sample_c), sample_c.out);
    if (*measure) return run_measure(resolve(measure, measure_c), measure_c.out);
    if (*repair) return run_repair_audit(resolve(repair, repair_c), repair_c.out);
    if (*tail) return run_perimeter_tail(resolve(tail, tail_c), tail_c.out);
    if (*edc) return run_ed_check(ed);
    if (*sec) return run_series_check(se);
    if (*mic) return run_mirror(mi);
    if (*rec) return run_render(re);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
