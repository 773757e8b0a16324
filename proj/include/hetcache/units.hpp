#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hetcache {

// Fixed-point base units. All energy bookkeeping is integer attojoules and
// all timekeeping integer picoseconds so that ledgers compare bit-exact.
using aj_t = long long;   // attojoule, 1e-18 J (1 pJ = 1e6 aJ)
using aw_t = long long;   // attowatt,  1e-18 W (1 pW = 1e6 aW)
using ps_t = long long;   // picosecond
using cycle_t = unsigned long long;

inline constexpr long long AJ_PER_PJ = 1'000'000;
inline constexpr long long AJ_PER_NJ = 1'000'000'000;
inline constexpr long long AW_PER_PW = 1'000'000;
inline constexpr long long PS_PER_NS = 1'000;

inline constexpr int LINE_BYTES = 64;
inline constexpr int LINE_BITS = 512;

/// Error with a stable machine-checkable code prefix ("CODE: detail").
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Parses a non-negative decimal string ("13.27") into an integer scaled by
/// 10^frac_digits. Rejects anything that would lose precision.
long long parse_fixed(const std::string& text, int frac_digits);

/// Inverse of parse_fixed: exact decimal string, trailing zeros trimmed.
std::string print_fixed(long long value, int frac_digits);

/// ceil(latency_ps * clock) in cycles, clock given in MHz.
inline cycle_t cycles_for_ps(ps_t ps, long long clock_mhz) {
  __int128 n = static_cast<__int128>(ps) * clock_mhz + 999'999;
  return static_cast<cycle_t>(n / 1'000'000);
}

/// floor conversion of an absolute cycle count to picoseconds.
inline ps_t ps_for_cycles(cycle_t cycles, long long clock_mhz) {
  __int128 n = static_cast<__int128>(cycles) * 1'000'000;
  return static_cast<ps_t>(n / clock_mhz);
}

/// One 64-byte cache line as 8 little-endian words.
struct Line512 {
  std::array<std::uint64_t, 8> w{};

  bool operator==(const Line512&) const = default;

  int popcount() const {
    int n = 0;
    for (auto v : w) n += std::popcount(v);
    return n;
  }

  /// Number of differing bit positions against another line.
  int dissimilar_bits(const Line512& other) const {
    int n = 0;
    for (int i = 0; i < 8; ++i) n += std::popcount(w[i] ^ other.w[i]);
    return n;
  }
};

/// Parses 128 hex chars (byte 0 first) into a line. Throws Error(MALFORMED_LINE).
Line512 parse_line_hex(const std::string& hex);
std::string print_line_hex(const Line512& line);

}  // namespace hetcache
