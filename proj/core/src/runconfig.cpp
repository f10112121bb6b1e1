#include "qloops/runconfig.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace qloops {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " = '" + v + "' is not a number");
  }
}

long to_long(const std::string& key, const std::string& v) {
  long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError("config: " + key + " = '" + v + "' is not an integer");
  return x;
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
  const long x = to_long(key, v);
  if (x < 0) throw ConfigError("config: " + key + " must be >= 0");
  return static_cast<std::uint64_t>(x);
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
  }
  return kv;
}

void set_key(RunConfig& rc, const std::string& key, const std::string& value) {
  if (key == "model.n") rc.model.n = to_double(key, value);
  else if (key == "model.u") rc.model.u = to_double(key, value);
  else if (key == "model.kappa") rc.model.kappa = to_double(key, value);
  else if (key == "model.h") rc.model.h = to_double(key, value);
  else if (key == "lattice.kind") {
    try {
      rc.kind = parse_domain_kind(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  } else if (key == "lattice.L") rc.L = static_cast<int>(to_long(key, value));
  else if (key == "lattice.beta") rc.beta = to_double(key, value);
  else if (key == "mcmc.sweeps") rc.sweeps = to_count(key, value);
  else if (key == "mcmc.burnin") rc.burnin = to_count(key, value);
  else if (key == "mcmc.thin") rc.thin = to_count(key, value);
  else if (key == "mcmc.seed") rc.seed = to_count(key, value);
  else if (key == "mcmc.chains") rc.chains = static_cast<int>(to_long(key, value));
  else if (key.starts_with("model.") || key.starts_with("lattice.") || key.starts_with("mcmc."))
    throw ConfigError("config: unknown key '" + key + "'");
  else rc.extra[key] = value;
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig rc;
  for (const auto& [k, v] : parse_key_values(text)) set_key(rc, k, v);
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str());
}

void RunConfig::validate() const {
  try {
    model.validate();
    make_domain(kind, L, beta);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (thin == 0) throw ConfigError("config: mcmc.thin must be >= 1");
  if (chains < 1) throw ConfigError("config: mcmc.chains must be >= 1");
}

Schedule RunConfig::schedule(std::uint64_t chain) const {
  Schedule s;
  s.burnin = burnin;
  s.sweeps = sweeps;
  s.thin = thin;
  s.seed = seed;
  s.chain = chain;
  return s;
}

std::optional<std::string> RunConfig::get(const std::string& key) const {
  const auto it = extra.find(key);
  if (it == extra.end()) return std::nullopt;
  return it->second;
}

std::string RunConfig::get_or(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? to_double(key, *v) : fallback;
}

long RunConfig::get_int(const std::string& key, long fallback) const {
  const auto v = get(key);
  return v ? to_long(key, *v) : fallback;
}

std::string to_text(const RunConfig& rc) {
  std::ostringstream os;
  os.precision(17);
  os << "[model]\nn = " << rc.model.n << "\nu = " << rc.model.u << "\nkappa = " << rc.model.kappa
     << "\nh = " << rc.model.h << "\n\n[lattice]\nkind = " << to_string(rc.kind) << "\nL = " << rc.L
     << "\nbeta = " << rc.beta << "\n\n[mcmc]\nsweeps = " << rc.sweeps << "\nburnin = " << rc.burnin
     << "\nthin = " << rc.thin << "\nseed = " << rc.seed << "\nchains = " << rc.chains << "\n";
  // "[]" returns to top-level keys
  if (!rc.extra.empty()) os << "\n[]\n";
  for (const auto& [k, v] : rc.extra) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace qloops
