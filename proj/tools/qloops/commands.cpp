#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qloops/clusters.hpp"
#include "qloops/loops.hpp"
#include "qloops/mirror.hpp"
#include "qloops/observables.hpp"
#include "qloops/quantum.hpp"
#include "qloops/render.hpp"
#include "qloops/repair.hpp"
#include "qloops/sampler.hpp"
#include "qloops/smallexact.hpp"
#include "samples_io.hpp"

namespace qloops::cli {

using nlohmann::json;

namespace {

struct FlagKey {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr FlagKey kFlags[] = {
    {"--seed", "mcmc.seed", "master seed"},
    {"--chains", "mcmc.chains", "independent chains"},
    {"--sweeps", "mcmc.sweeps", "stored sweeps per chain"},
    {"--burnin", "mcmc.burnin", "burn-in sweeps"},
    {"--thin", "mcmc.thin", "sweeps between stored samples"},
    {"--n", "model.n", "loop weight"},
    {"--u", "model.u", "cross probability"},
    {"--kappa", "model.kappa", "small-loop threshold parameter"},
    {"--block-h", "model.h", "block height parameter"},
    {"--kind", "lattice.kind", "torus | primal | dual"},
    {"--L", "lattice.L", "half length"},
    {"--beta", "lattice.beta", "time extent"},
};

// Writes to the named file, or stdout for an empty name or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct ChainRun {
  std::vector<LinkConfig> cfgs;
  std::vector<int> ells;
  std::vector<std::uint64_t> sweeps;
  MoveTally tally;
};

// One task per chain; results are merged in chain order so the output does not depend
// on scheduling.
std::vector<ChainRun> run_chains(const RunConfig& rc) {
  const Domain d = rc.domain();
  std::vector<std::future<ChainRun>> jobs;
  for (int c = 0; c < rc.chains; ++c) {
    jobs.push_back(std::async(std::launch::async, [&rc, d, c] {
      ChainRun run;
      const ChainState end = run_chain(rc.model, d, rc.schedule(static_cast<std::uint64_t>(c)), [&](const ChainState& s) {
        run.cfgs.push_back(s.cfg);
        run.ells.push_back(s.ell);
        run.sweeps.push_back(s.sweep);
      });
      run.tally = end.tally;
      return run;
    }));
  }
  std::vector<ChainRun> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

std::vector<LinkConfig> all_samples(const std::vector<ChainRun>& runs) {
  std::vector<LinkConfig> v;
  for (const auto& r : runs) v.insert(v.end(), r.cfgs.begin(), r.cfgs.end());
  return v;
}

json estimate_json(const EstimatorResult& e) {
  return json{{"mean", e.mean},
              {"std_error", e.std_error},
              {"n", e.n_samples},
              {"tau", e.autocorrelation_time}};
}

ObservableSpec named_observable(const std::string& name, int n, int site) {
  if (name == "Q") return q_observable(n, site);
  if (name == "T") return t_observable(n, site);
  if (name == "identity") return identity_observable(n);
  throw ConfigError("unknown observable '" + name + "' (Q, T, identity)");
}

int integer_n(double n) {
  const int k = static_cast<int>(std::lround(n));
  if (std::abs(n - k) > 1e-12 || k < 1) throw ConfigError("n must be a positive integer here");
  return k;
}

}  // namespace

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "run configuration file")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output file (default stdout)");
  for (const auto& f : kFlags) sub->add_option(f.flag, c.overrides[f.key], f.help);
  sub->add_option("--set", c.sets, "extra key=value settings");
}

RunConfig resolve(const CLI::App* sub, const Common& c) {
  RunConfig rc = c.config.empty() ? RunConfig{} : load_run_config(c.config);
  for (const auto& f : kFlags)
    if (sub->count(f.flag) > 0) set_key(rc, f.key, c.overrides.at(f.key));
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    set_key(rc, s.substr(0, eq), s.substr(eq + 1));
  }
  rc.validate();
  return rc;
}

int run_sample(const RunConfig& rc, const std::string& out) {
  const auto runs = run_chains(rc);
  Output o(out);
  auto& os = o.stream();
  os << header_line(rc) << "\n";
  for (std::size_t c = 0; c < runs.size(); ++c)
    for (std::size_t i = 0; i < runs[c].cfgs.size(); ++i)
      os << sample_line(runs[c].cfgs[i], static_cast<int>(c), runs[c].sweeps[i], runs[c].ells[i]) << "\n";
  return 0;
}

int run_measure(const RunConfig& rc, const std::string& out) {
  const Domain d = rc.domain();
  const std::string obs_name = rc.get_or("measure.observable", "Q");
  const int site = static_cast<int>(rc.get_int("measure.site", 0));
  const int n = integer_n(rc.model.n);
  const ObservableSpec obs = named_observable(obs_name, n, site);
  for (int x : obs.sites)
    if (!d.has_site(x)) throw ConfigError("measure.site puts the observable outside the domain");

  const auto runs = run_chains(rc);
  const auto samples = all_samples(runs);
  std::vector<double> ells;
  for (const auto& r : runs) ells.insert(ells.end(), r.ells.begin(), r.ells.end());

  json j;
  j["domain"] = {{"kind", to_string(rc.kind)}, {"L", rc.L}, {"beta", rc.beta}};
  j["model"] = {{"n", rc.model.n}, {"u", rc.model.u}, {"kappa", rc.model.kappa}, {"h", rc.model.h}};
  j["ell"] = estimate_json(estimate(ells));
  j["observable"] = estimate_json(loop_estimator(samples, d, rc.model.n, obs));
  j["observable"]["name"] = obs.name;
  j["psi"] = estimate_json(dimer_order_parameter(samples, d, rc.model));
  const long dim = static_cast<long>(std::pow(n, d.n_sites()));
  if (n >= 2 && dim <= kMaxQuantumDim) {
    const QuantumModel m = build_loop_model(n, rc.L, rc.model.u);
    j["observable"]["exact"] =
        d.periodic() ? gibbs_expectation(m, obs, rc.beta) : seeded_expectation(m, obs, rc.beta);
  }
  Output o(out);
  o.stream() << j.dump(2) << "\n";
  return 0;
}

int run_ed_check(const EdArgs& a) {
  const DomainKind kind = parse_domain_kind(a.kind);
  const QuantumModel m = build_model(a.n, a.L, a.u);
  const ObservableSpec obs = named_observable(a.observable, a.n, a.site);
  const double exact = kind == DomainKind::torus ? gibbs_expectation(m, obs, a.beta) : seeded_expectation(m, obs, a.beta);

  const LoopParams lp = loop_params_for(a.n, a.u, a.beta);
  const Domain d = make_domain(kind, a.L, lp.beta);
  for (int x : obs.sites)
    if (!d.has_site(x)) throw ConfigError("--site puts the observable outside the domain");
  SimParams p;
  p.n = a.n;
  p.u = lp.u;
  Schedule sch;
  sch.burnin = a.burnin;
  sch.sweeps = a.sweeps;
  sch.seed = a.seed;
  std::vector<double> vals;
  run_chain(p, d, sch, [&](const ChainState& s) { vals.push_back(loop_observable_sample(s.cfg, d, a.n, obs)); });
  const auto est = estimate(vals);
  const double dist = est.std_error > 0 ? std::abs(est.mean - exact) / est.std_error : 0.0;
  std::printf("model: n=%d L=%d u=%.6g beta=%.6g %s\n", a.n, a.L, a.u, a.beta, to_string(kind).c_str());
  std::printf("loop measure: u'=%.10g beta'=%.10g\n", lp.u, lp.beta);
  std::printf("exact <%s> = %.10f\n", obs.name.c_str(), exact);
  std::printf("estimate   = %.10f +- %.10f (tau %.2f, %zu samples)\n", est.mean, est.std_error,
              est.autocorrelation_time, est.n_samples);
  std::printf("distance   = %.3f sigma\n", dist);
  return 0;
}

int run_series_check(const SeriesArgs& a) {
  const Domain d = make_domain(DomainKind::torus, a.L, a.beta);
  int K = a.K;
  SeriesResult s;
  if (K < 0) {
    // smallest order whose tail is negligible, within the budget
    const int kmax = max_series_order(d);
    for (K = 1;; ++K) {
      s = partition_series(d, a.u, a.n, K);
      if (s.tail_bound < 1e-12 || K == kmax) break;
    }
  } else {
    s = partition_series(d, a.u, a.n, K);
  }
  const double tr = partition_function(build_loop_model(a.n, a.L, a.u), a.beta);
  const double diff = std::abs(tr - s.value);
  std::printf("trace    = %.15g\n", tr);
  std::printf("series   = %.15g (K=%d)\n", s.value, s.K);
  std::printf("|diff|   = %.3e\n", diff);
  std::printf("tail     = %.3e\n", s.tail_bound);
  const bool ok = diff <= s.tail_bound + 1e-8;
  std::printf("%s\n", ok ? "within bound" : "OUTSIDE BOUND");
  return ok ? 0 : 2;
}

int run_repair_audit(const RunConfig& rc, const std::string& out) {
  const Domain d = rc.domain();
  if (d.kind != DomainKind::primal_rect) throw ConfigError("repair-audit needs lattice.kind = primal");
  const int max_out = static_cast<int>(rc.get_int("repair.max_out", 8));
  if (max_out > kMaxPreimageOut) throw ConfigError("repair.max_out exceeds " + std::to_string(kMaxPreimageOut));
  const auto samples = all_samples(run_chains(rc));
  Output o(out);
  auto& os = o.stream();
  os << "index,ell,delta_ell,exposed,exposed_after,vol,vol_after,vol1_after,n_out_bar,preimages\n";
  int violations = 0, enumerated = 0;
  std::string first;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      const RepairOutput r = repair(samples[i], d, rc.model);
      check_repair(r, d);
      long pre = -1;
      int n_out = 0;
      for (const auto& li : r.outside_bar.links) n_out += li.out;
      if (n_out <= max_out) {
        const auto pc = count_preimages(r, d, rc.model, &samples[i]);
        ++enumerated;
        pre = pc.count;
        if (!pc.contains_target) throw std::logic_error("configuration missing from its own preimage set");
        if (static_cast<double>(pc.count) > std::pow(4.0, pc.n_out))
          throw std::logic_error("preimage count above 4^|out|");
      }
      os << i << "," << r.ell_before << "," << r.delta_ell() << "," << r.n_exposed_before << "," << r.n_exposed_after
         << "," << r.vol_before << "," << r.vol_after << "," << r.vol1_after << "," << n_out << "," << pre << "\n";
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const std::invalid_argument*>(&e)) throw;
      if (violations++ == 0) first = "sample " + std::to_string(i) + ": " + e.what();
    }
  }
  std::cerr << samples.size() << " samples, " << enumerated << " preimage enumerations, " << violations
            << " violations\n";
  if (violations > 0) {
    std::cerr << "first violation: " << first << "\n";
    return 2;
  }
  return 0;
}

int run_perimeter_tail(const RunConfig& rc, const std::string& out) {
  const Domain d = rc.domain();
  const SitePoint x0{static_cast<int>(rc.get_int("perimeter.site", 0)),
                     rc.get_double("perimeter.t", 0.5 * (d.t_lo() + d.t_hi()))};
  const auto samples = all_samples(run_chains(rc));
  const auto per = perimeters(samples, d, rc.model, x0);
  const TailFit tf = tail_fit(per, false);
  Output o(out);
  auto& os = o.stream();
  os << "perimeter,survival\n";
  for (const auto& pt : tf.table) os << pt.v << "," << pt.survival << "\n";
  if (tf.fit)
    os << "# slope=" << tf.fit->slope << " intercept=" << tf.fit->intercept << " r2=" << tf.fit->r2
       << " usable=" << tf.usable << "\n";
  else
    os << "# no fit: " << tf.usable << " usable points\n";
  return 0;
}

int run_mirror(const MirrorArgs& a) {
  const MirrorBoundary b = parse_mirror_boundary(a.boundary);
  if (b == MirrorBoundary::walls) throw ConfigError("--boundary walls is only used by the continuum bridge");
  const MirrorLattice lat = MirrorLattice::brick(a.rows, a.cols, b);
  MirrorParams p{a.p_v, a.p_h, a.p_empty, a.n};
  if (a.u || a.eps) {
    if (!(a.u && a.eps)) throw ConfigError("--u and --eps go together");
    p = rescaled_params(*a.u, *a.eps, a.n);
  }
  p.validate();
  if (a.exact && static_cast<int>(lat.free_sites().size()) > kMaxEnumeratedSites)
    throw ConfigError("--exact needs at most " + std::to_string(kMaxEnumeratedSites) + " free sites");
  Rng rng = make_rng(a.seed);
  MirrorConfig c = random_config(lat, p, rng);
  for (std::uint64_t i = 0; i < a.burnin; ++i) mirror_sweep(lat, c, p, rng);
  std::vector<double> order, ells;
  const int probe = lat.free_sites().empty() ? -1 : lat.free_sites()[lat.free_sites().size() / 2];
  std::vector<double> marg[3];
  for (std::uint64_t i = 0; i < a.sweeps; ++i) {
    mirror_sweep(lat, c, p, rng);
    order.push_back(face_order(lat, c).value());
    ells.push_back(mirror_trace_loops(lat, c));
    if (probe >= 0)
      for (int m = 0; m < 3; ++m) marg[m].push_back(c.state[probe] == static_cast<Mirror>(m) ? 1.0 : 0.0);
  }
  json j;
  j["lattice"] = {{"rows", a.rows}, {"cols", a.cols}, {"boundary", a.boundary}};
  j["params"] = {{"p_v", p.p_v}, {"p_h", p.p_h}, {"p_empty", p.p_empty}, {"n", p.n}};
  j["order"] = estimate_json(estimate(order));
  j["ell"] = estimate_json(estimate(ells));
  if (probe >= 0) {
    j["probe_site"] = {lat.pos(probe)[0], lat.pos(probe)[1]};
    for (int m = 0; m < 3; ++m) j["probe_marginal"].push_back(estimate_json(estimate(marg[m])));
  }
  if (a.exact && probe >= 0) {
    const auto w = mirror_enumerate_exact(lat, p);
    const auto& fs = lat.free_sites();
    const long k = std::find(fs.begin(), fs.end(), probe) - fs.begin();
    double ex[3] = {0, 0, 0};
    long stride = 1;
    for (long i = 0; i < k; ++i) stride *= 3;
    for (std::size_t i = 0; i < w.size(); ++i) ex[(static_cast<long>(i) / stride) % 3] += w[i];
    j["probe_exact"] = {ex[0], ex[1], ex[2]};
  }
  Output o(a.out);
  o.stream() << j.dump(2) << "\n";
  if (!a.dump.empty()) {
    Output g(a.dump);
    g.stream() << mirror_to_text(lat, c);
  }
  return 0;
}

int run_render(const RenderArgs& a) {
  const SampleFile sf = read_samples(a.in);
  if (a.index < 0 || a.index >= static_cast<long>(sf.samples.size()))
    throw ConfigError("--index " + std::to_string(a.index) + " out of range (" + std::to_string(sf.samples.size()) +
                      " samples)");
  const Domain d = sf.run.domain();
  const LinkConfig& cfg = sf.samples[a.index].cfg;
  std::string svg;
  if (a.clusters) {
    const ClusterReport rep = build_clusters(cfg, d, sf.run.model);
    svg = render_svg(cfg, d, &rep);
  } else {
    svg = render_svg(cfg, d);
  }
  Output o(a.out);
  o.stream() << svg;
  return 0;
}

}  // namespace qloops::cli
