#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "qloops/geometry.hpp"
#include "qloops/linkconfig.hpp"
#include "qloops/rng.hpp"

namespace qloops {

enum MoveType { kBirth = 0, kDeath = 1, kFlip = 2 };

struct MoveTally {
  std::array<std::uint64_t, 3> proposed{};
  std::array<std::uint64_t, 3> accepted{};
  std::uint64_t total_proposed() const { return proposed[0] + proposed[1] + proposed[2]; }
};

struct ChainState {
  LinkConfig cfg;
  int ell = 0;
  std::uint64_t sweep = 0;
  Rng rng;
  MoveTally tally;
};

ChainState init_chain(const Domain& d, std::uint64_t seed, std::uint64_t chain = 0);

struct MoveMix {
  double p_birth;
  double p_death;
  double p_flip;
};
MoveMix move_mix(double u);

// One Metropolis update of the measure proportional to n^ell times the base process.
void mcmc_step(ChainState& s, const SimParams& p, const Domain& d);
std::uint64_t steps_per_sweep(const Domain& d);
void mcmc_sweep(ChainState& s, const SimParams& p, const Domain& d);

// Acceptance probability of a proposal; exposed for the detailed-balance audit.
double acceptance(MoveType type, const SimParams& p, const Domain& d, std::size_t n_links, int delta_ell,
                  LinkKind kind_before);

struct Schedule {
  std::uint64_t burnin = 100;
  std::uint64_t sweeps = 1000;
  std::uint64_t thin = 1;
  std::uint64_t seed = 1;
  std::uint64_t chain = 0;
  std::uint64_t audit_every = 1000;  // sweeps between cached-ell audits, 0 disables
  std::string checkpoint_path;       // empty disables checkpoints
  std::uint64_t checkpoint_every = 0;
};

// Runs burn-in then `sweeps` sweeps, calling sink after every `thin`-th sweep.
using SampleSink = std::function<void(const ChainState&)>;
ChainState run_chain(const SimParams& p, const Domain& d, const Schedule& sch, const SampleSink& sink);
// Continue an existing chain for a number of sweeps with the same sink contract.
void continue_chain(ChainState& s, const SimParams& p, const Domain& d, const Schedule& sch, const SampleSink& sink);

void audit_ell(const ChainState& s, const Domain& d);

// Checkpoints: the link configuration text plus "#" footer lines for the sweep counter,
// cached ell, tallies and the generator state in hex.
std::string checkpoint_text(const ChainState& s, const Domain& d);
struct Restored {
  Domain domain;
  ChainState state;
};
Restored restore_checkpoint(const std::string& text);
void write_checkpoint(const std::string& path, const ChainState& s, const Domain& d);
Restored read_checkpoint(const std::string& path);

// Conditional law given that only bars on boundary-parity columns are present: a Poisson
// process of bars of rate (1-u) n on those columns.
LinkConfig sample_T1(const SimParams& p, const Domain& d, Rng& rng);
// Rejection sampler for the same law, using traced loop counts. Throws when the
// attempt budget is exhausted.
LinkConfig sample_T1_rejection(const SimParams& p, const Domain& d, Rng& rng, std::uint64_t max_attempts = 1000000);
bool in_T1(const LinkConfig& cfg, const Domain& d);

}  // namespace qloops
