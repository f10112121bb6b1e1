#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qloops/runconfig.hpp"

namespace CLI {
class App;
}

namespace qloops::cli {

// Flags shared by the chain-driven subcommands. Overrides are stored under their
// RunConfig keys and applied after the config file.
struct Common {
  std::string config;
  std::string out;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> sets;  // --set key=value
};

void add_common(CLI::App* sub, Common& c);
RunConfig resolve(const CLI::App* sub, const Common& c);

struct EdArgs {
  int n = 2;
  int L = 1;
  double u = 0.0;
  double beta = 1.0;
  std::string kind = "torus";
  std::string observable = "Q";
  int site = 0;
  std::uint64_t sweeps = 20000;
  std::uint64_t burnin = 1000;
  std::uint64_t seed = 1;
};

struct SeriesArgs {
  int n = 2;
  int L = 1;
  double u = 0.5;
  double beta = 0.2;
  int K = -1;
};

struct MirrorArgs {
  int rows = 10;
  int cols = 10;
  std::string boundary = "black";
  double n = 8.0;
  double p_v = 0.45;
  double p_h = 0.45;
  double p_empty = 0.1;
  std::optional<double> u;
  std::optional<double> eps;
  std::uint64_t sweeps = 10000;
  std::uint64_t burnin = 1000;
  std::uint64_t seed = 1;
  bool exact = false;
  std::string out;
  std::string dump;
};

struct RenderArgs {
  std::string in;
  long index = 0;
  std::string out;
  bool clusters = false;
};

int run_sample(const RunConfig& rc, const std::string& out);
int run_measure(const RunConfig& rc, const std::string& out);
int run_ed_check(const EdArgs& a);
int run_series_check(const SeriesArgs& a);
int run_repair_audit(const RunConfig& rc, const std::string& out);
int run_perimeter_tail(const RunConfig& rc, const std::string& out);
int run_mirror(const MirrorArgs& a);
int run_render(const RenderArgs& a);

}  // namespace qloops::cli
