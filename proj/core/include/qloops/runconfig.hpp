#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "qloops/geometry.hpp"
#include "qloops/linkconfig.hpp"
#include "qloops/sampler.hpp"

namespace qloops {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Plain "key = value" lines; "[section]" prefixes the following keys with "section.";
// '#' starts a comment. Later keys override earlier ones.
std::map<std::string, std::string> parse_key_values(const std::string& text);

struct RunConfig {
  SimParams model;
  DomainKind kind = DomainKind::torus;
  int L = 2;
  double beta = 1.0;
  std::uint64_t sweeps = 1000;
  std::uint64_t burnin = 100;
  std::uint64_t thin = 1;
  std::uint64_t seed = 1;
  int chains = 1;
  // keys outside model / lattice / mcmc, e.g. "measure.observable"
  std::map<std::string, std::string> extra;

  Domain domain() const { return make_domain(kind, L, beta); }
  Schedule schedule(std::uint64_t chain) const;
  void validate() const;

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
};

// Sets one dotted key; known keys are parsed and checked, others land in extra.
void set_key(RunConfig& rc, const std::string& key, const std::string& value);
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
std::string to_text(const RunConfig& rc);

}  // namespace qloops
