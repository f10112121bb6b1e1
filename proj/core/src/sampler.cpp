#include "qloops/sampler.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qloops/loops.hpp"

namespace qloops {

ChainState init_chain(const Domain& d, std::uint64_t seed, std::uint64_t chain) {
  ChainState s;
  s.cfg = LinkConfig(d);
  s.ell = count_loops(s.cfg, d);
  s.rng = make_rng(seed, chain);
  return s;
}

MoveMix move_mix(double u) {
  if (u <= 0.0 || u >= 1.0) return MoveMix{0.5, 0.5, 0.0};
  return MoveMix{0.4, 0.4, 0.2};
}

std::uint64_t steps_per_sweep(const Domain& d) {
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(d.nu())));
}

double acceptance(MoveType type, const SimParams& p, const Domain& d, std::size_t n_links, int delta_ell,
                  LinkKind kind_before) {
  const double w = std::pow(p.n, delta_ell);
  double r = 0.0;
  switch (type) {
    case kBirth: r = d.nu() / static_cast<double>(n_links + 1) * w; break;
    case kDeath: r = static_cast<double>(n_links) / d.nu() * w; break;
    case kFlip:
      r = (kind_before == LinkKind::cross ? (1.0 - p.u) / p.u : p.u / (1.0 - p.u)) * w;
      break;
  }
  return std::min(1.0, r);
}

void mcmc_step(ChainState& s, const SimParams& p, const Domain& d) {
  const MoveMix mix = move_mix(p.u);
  const double r = uniform01(s.rng);
  MoveType type = r < mix.p_birth ? kBirth : (r < mix.p_birth + mix.p_death ? kDeath : kFlip);
  s.tally.proposed[type]++;
  const std::size_t N = s.cfg.size();
  if (type == kBirth) {
    std::uniform_int_distribution<int> edge(d.edge_min(), d.edge_max());
    std::uniform_real_distribution<double> time(d.t_lo(), d.t_hi());
    Link l;
    l.edge = edge(s.rng);
    l.t = time(s.rng);
    l.kind = uniform01(s.rng) < p.u ? LinkKind::cross : LinkKind::bar;
    if (!d.contains_link(l.edge, l.t) || collides_with_link(s.cfg, d, SitePoint{l.edge, l.t}) ||
        collides_with_link(s.cfg, d, SitePoint{l.edge + 1, l.t}))
      return;  // measure-zero collision; treated as a rejected proposal
    const int dl = apply_and_delta(s.cfg, d, InsertMove{l});
    if (uniform01(s.rng) < acceptance(kBirth, p, d, N, dl, l.kind)) {
      s.ell += dl;
      s.tally.accepted[kBirth]++;
    } else {
      s.cfg.erase(s.cfg.global_index(l.edge, s.cfg.find(l.edge, l.t)));
    }
    return;
  }
  if (N == 0) return;
  std::uniform_int_distribution<std::size_t> pick(0, N - 1);
  const std::size_t idx = pick(s.rng);
  if (type == kDeath) {
    const Link l = s.cfg.at(idx);
    const int dl = apply_and_delta(s.cfg, d, DeleteMove{idx});
    if (uniform01(s.rng) < acceptance(kDeath, p, d, N, dl, l.kind)) {
      s.ell += dl;
      s.tally.accepted[kDeath]++;
    } else {
      s.cfg.insert(l);
    }
    return;
  }
  const Link l = s.cfg.at(idx);
  const int dl = apply_and_delta(s.cfg, d, FlipMove{idx});
  if (uniform01(s.rng) < acceptance(kFlip, p, d, N, dl, l.kind)) {
    s.ell += dl;
    s.tally.accepted[kFlip]++;
  } else {
    s.cfg.flip(idx);
  }
}

void mcmc_sweep(ChainState& s, const SimParams& p, const Domain& d) {
  const auto steps = steps_per_sweep(d);
  for (std::uint64_t i = 0; i < steps; ++i) mcmc_step(s, p, d);
  ++s.sweep;
}

void audit_ell(const ChainState& s, const Domain& d) {
  const int traced = count_loops(s.cfg, d);
  if (traced != s.ell)
    throw std::logic_error("cached loop count " + std::to_string(s.ell) + " differs from traced " +
                           std::to_string(traced) + " at sweep " + std::to_string(s.sweep));
}

void continue_chain(ChainState& s, const SimParams& p, const Domain& d, const Schedule& sch, const SampleSink& sink) {
  const std::uint64_t thin = std::max<std::uint64_t>(1, sch.thin);
  for (std::uint64_t i = 1; i <= sch.sweeps; ++i) {
    mcmc_sweep(s, p, d);
    if (sch.audit_every > 0 && s.sweep % sch.audit_every == 0) audit_ell(s, d);
    if (!sch.checkpoint_path.empty() && sch.checkpoint_every > 0 && s.sweep % sch.checkpoint_every == 0)
      write_checkpoint(sch.checkpoint_path, s, d);
    if (i % thin == 0 && sink) sink(s);
  }
}

ChainState run_chain(const SimParams& p, const Domain& d, const Schedule& sch, const SampleSink& sink) {
  p.validate();
  if (sch.sweeps == 0) throw std::invalid_argument("schedule: sweeps must be positive");
  ChainState s = init_chain(d, sch.seed, sch.chain);
  for (std::uint64_t i = 0; i < sch.burnin; ++i) mcmc_sweep(s, p, d);
  if (sch.audit_every > 0) audit_ell(s, d);
  continue_chain(s, p, d, sch, sink);
  if (sch.audit_every > 0) audit_ell(s, d);
  return s;
}

std::string checkpoint_text(const ChainState& s, const Domain& d) {
  std::ostringstream os;
  os << serialize(s.cfg, d);
  os << "# sweep=" << s.sweep << "\n";
  os << "# ell=" << s.ell << "\n";
  os << "# tally=";
  for (int k = 0; k < 3; ++k) os << s.tally.proposed[k] << ',' << s.tally.accepted[k] << (k < 2 ? "," : "");
  os << "\n";
  os << "# rng=" << rng_state_hex(s.rng) << "\n";
  return os.str();
}

Restored restore_checkpoint(const std::string& text) {
  ParsedConfig pc = deserialize(text);
  Restored r;
  r.domain = pc.domain;
  r.state.cfg = std::move(pc.cfg);
  bool have_sweep = false, have_rng = false, have_ell = false;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# sweep=", 0) == 0) {
      r.state.sweep = std::stoull(line.substr(8));
      have_sweep = true;
    } else if (line.rfind("# ell=", 0) == 0) {
      r.state.ell = std::stoi(line.substr(6));
      have_ell = true;
    } else if (line.rfind("# tally=", 0) == 0) {
      std::istringstream ts(line.substr(8));
      std::string tok;
      for (int k = 0; k < 6 && std::getline(ts, tok, ','); ++k) {
        if (k % 2 == 0) r.state.tally.proposed[k / 2] = std::stoull(tok);
        else r.state.tally.accepted[k / 2] = std::stoull(tok);
      }
    } else if (line.rfind("# rng=", 0) == 0) {
      r.state.rng = rng_from_hex(line.substr(6));
      have_rng = true;
    }
  }
  if (!have_sweep || !have_rng || !have_ell) throw std::invalid_argument("checkpoint: missing footer");
  audit_ell(r.state, r.domain);
  return r;
}

void write_checkpoint(const std::string& path, const ChainState& s, const Domain& d) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open checkpoint file '" + tmp + "' for writing");
    out << checkpoint_text(s, d);
    if (!out) throw std::runtime_error("failed writing checkpoint '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move checkpoint into place at '" + path + "'");
}

Restored read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return restore_checkpoint(ss.str());
}

bool in_T1(const LinkConfig& cfg, const Domain& d) {
  const Parity want = d.boundary_parity();
  for (int e = d.edge_min(); e <= d.edge_max(); ++e) {
    const auto& v = cfg.on_edge(e);
    if (v.empty()) continue;
    if (edge_parity(e) != want) return false;
    for (const auto& el : v)
      if (el.kind != LinkKind::bar) return false;
  }
  return true;
}

LinkConfig sample_T1(const SimParams& p, const Domain& d, Rng& rng) {
  if (d.periodic()) throw std::invalid_argument("sample_T1 requires a rectangle domain");
  LinkConfig cfg(d);
  const double rate = (1.0 - p.u) * p.n;
  if (rate <= 0.0) return cfg;
  std::uniform_real_distribution<double> time(d.t_lo(), d.t_hi());
  std::poisson_distribution<int> count(rate * d.beta);
  for (int e = d.edge_min(); e <= d.edge_max(); ++e) {
    if (edge_parity(e) != d.boundary_parity()) continue;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) {
      double t = time(rng);
      while (!d.contains_link(e, t) || cfg.find(e, t) != LinkConfig::npos) t = time(rng);
      cfg.insert(Link{e, t, LinkKind::bar});
    }
  }
  return cfg;
}

LinkConfig sample_T1_rejection(const SimParams& p, const Domain& d, Rng& rng, std::uint64_t max_attempts) {
  if (d.periodic()) throw std::invalid_argument("sample_T1_rejection requires a rectangle domain");
  if (p.n < 1.0) throw std::invalid_argument("sample_T1_rejection requires n >= 1");
  const int ell0 = count_loops(LinkConfig(d), d);
  for (std::uint64_t a = 0; a < max_attempts; ++a) {
    // Proposal: crosses at rate u n and bars at rate (1-u) n on every edge.
    LinkConfig cfg(d);
    std::uniform_real_distribution<double> time(d.t_lo(), d.t_hi());
    for (int e = d.edge_min(); e <= d.edge_max(); ++e) {
      for (LinkKind kind : {LinkKind::cross, LinkKind::bar}) {
        const double rate = (kind == LinkKind::cross ? p.u : 1.0 - p.u) * p.n;
        if (rate <= 0.0) continue;
        const int k = std::poisson_distribution<int>(rate * d.beta)(rng);
        for (int i = 0; i < k; ++i) {
          double t = time(rng);
          while (!d.contains_link(e, t) || cfg.find(e, t) != LinkConfig::npos) t = time(rng);
          cfg.insert(Link{e, t, kind});
        }
      }
    }
    if (!in_T1(cfg, d)) continue;
    const int ell = count_loops(cfg, d);
    const double acc = std::pow(p.n, ell - ell0 - static_cast<int>(cfg.size()));
    if (uniform01(rng) < acc) return cfg;
  }
  throw std::runtime_error("sample_T1_rejection: attempt budget exhausted");
}

}  // namespace qloops
