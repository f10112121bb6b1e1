#include "qloops/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace qloops {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

std::string rng_state_hex(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  const std::string s = os.str();
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * s.size());
  for (unsigned char c : s) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

Rng rng_from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("rng state: odd hex length");
  auto val = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("rng state: bad hex digit");
  };
  std::string s;
  s.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) s.push_back(static_cast<char>(val(hex[i]) * 16 + val(hex[i + 1])));
  std::istringstream is(s);
  Rng rng;
  is >> rng;
  if (!is) throw std::invalid_argument("rng state: malformed");
  return rng;
}

}  // namespace qloops
