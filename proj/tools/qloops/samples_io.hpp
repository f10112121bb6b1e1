#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qloops/linkconfig.hpp"
#include "qloops/runconfig.hpp"

namespace qloops::cli {

// Sample streams are NDJSON: one header object, then one object per stored sample.
std::string header_line(const RunConfig& rc);
std::string sample_line(const LinkConfig& cfg, int chain, std::uint64_t sweep, int ell);

struct SampleRecord {
  int chain = 0;
  std::uint64_t sweep = 0;
  int ell = 0;
  LinkConfig cfg;
};

struct SampleFile {
  RunConfig run;
  std::vector<SampleRecord> samples;
};

SampleFile read_samples(const std::string& path);

}  // namespace qloops::cli
