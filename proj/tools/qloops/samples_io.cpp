#include "samples_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace qloops::cli {

using nlohmann::json;

std::string header_line(const RunConfig& rc) {
  json h;
  h["format"] = "qloops-samples";
  h["version"] = 1;
  h["kind"] = to_string(rc.kind);
  h["L"] = rc.L;
  h["beta"] = rc.beta;
  h["n"] = rc.model.n;
  h["u"] = rc.model.u;
  h["kappa"] = rc.model.kappa;
  h["h"] = rc.model.h;
  h["seed"] = rc.seed;
  h["chains"] = rc.chains;
  return h.dump();
}

std::string sample_line(const LinkConfig& cfg, int chain, std::uint64_t sweep, int ell) {
  json s;
  s["chain"] = chain;
  s["sweep"] = sweep;
  s["ell"] = ell;
  json links = json::array();
  for (const auto& l : cfg.links()) links.push_back(json::array({l.edge, l.t, l.kind == LinkKind::bar ? "B" : "X"}));
  s["links"] = std::move(links);
  return s.dump();
}

SampleFile read_samples(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open sample file '" + path + "'");
  SampleFile out;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  Domain d;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed JSON");
    }
    try {
      if (!have_header) {
        if (j.value("format", "") != "qloops-samples") throw ConfigError(path + ": missing sample-stream header");
        RunConfig& rc = out.run;
        rc.kind = parse_domain_kind(j.at("kind").get<std::string>());
        rc.L = j.at("L").get<int>();
        rc.beta = j.at("beta").get<double>();
        rc.model.n = j.at("n").get<double>();
        rc.model.u = j.at("u").get<double>();
        rc.model.kappa = j.at("kappa").get<double>();
        rc.model.h = j.at("h").get<double>();
        rc.seed = j.at("seed").get<std::uint64_t>();
        rc.chains = j.at("chains").get<int>();
        d = rc.domain();
        have_header = true;
        continue;
      }
      SampleRecord r;
      r.chain = j.at("chain").get<int>();
      r.sweep = j.at("sweep").get<std::uint64_t>();
      r.ell = j.at("ell").get<int>();
      r.cfg = LinkConfig(d);
      for (const auto& l : j.at("links")) {
        const std::string k = l.at(2).get<std::string>();
        if (k != "B" && k != "X") throw ConfigError("bad link kind '" + k + "'");
        r.cfg.insert(Link{l.at(0).get<int>(), l.at(1).get<double>(), k == "B" ? LinkKind::bar : LinkKind::cross});
      }
      out.samples.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw ConfigError(path + ": empty sample file");
  return out;
}

}  // namespace qloops::cli
