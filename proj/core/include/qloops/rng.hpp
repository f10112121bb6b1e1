#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace qloops {

using Rng = std::mt19937_64;

// Independent stream for (seed, stream index); every published number is a function of both.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

std::string rng_state_hex(const Rng& rng);
Rng rng_from_hex(const std::string& hex);

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace qloops
