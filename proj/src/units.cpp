#include "hetcache/units.hpp"

#include <cctype>

namespace hetcache {

long long parse_fixed(const std::string& text, int frac_digits) {
  if (text.empty()) throw Error("BAD_NUMBER", "empty numeric field");
  long long value = 0;
  std::size_t i = 0;
  bool any_digit = false;
  for (; i < text.size() && text[i] != '.'; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw Error("BAD_NUMBER", "'" + text + "' is not a non-negative decimal");
    value = value * 10 + (text[i] - '0');
    any_digit = true;
  }
  int frac_seen = 0;
  if (i < text.size()) {  // fractional part
    for (++i; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw Error("BAD_NUMBER", "'" + text + "' is not a non-negative decimal");
      if (frac_seen == frac_digits) {
        if (text[i] != '0')
          throw Error("BAD_NUMBER", "'" + text + "' has more than " +
                                        std::to_string(frac_digits) +
                                        " significant fractional digits");
        continue;
      }
      value = value * 10 + (text[i] - '0');
      ++frac_seen;
      any_digit = true;
    }
  }
  if (!any_digit) throw Error("BAD_NUMBER", "'" + text + "' has no digits");
  for (; frac_seen < frac_digits; ++frac_seen) value *= 10;
  return value;
}

std::string print_fixed(long long value, int frac_digits) {
  long long scale = 1;
  for (int i = 0; i < frac_digits; ++i) scale *= 10;
  long long whole = value / scale;
  long long frac = value % scale;
  std::string out = std::to_string(whole);
  if (frac != 0) {
    std::string f = std::to_string(frac);
    f.insert(f.begin(), frac_digits - f.size(), '0');
    while (!f.empty() && f.back() == '0') f.pop_back();
    out += "." + f;
  }
  return out;
}

namespace {
int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Line512 parse_line_hex(const std::string& hex) {
  if (hex.size() != 128)
    throw Error("MALFORMED_LINE", "payload must be 128 hex chars, got " +
                                      std::to_string(hex.size()));
  Line512 line;
  for (int byte = 0; byte < LINE_BYTES; ++byte) {
    int hi = hex_nibble(hex[2 * byte]);
    int lo = hex_nibble(hex[2 * byte + 1]);
    if (hi < 0 || lo < 0) throw Error("MALFORMED_LINE", "bad hex in payload");
    std::uint64_t b = static_cast<std::uint64_t>(hi << 4 | lo);
    line.w[byte / 8] |= b << (8 * (byte % 8));
  }
  return line;
}

std::string print_line_hex(const Line512& line) {
  static const char* digits = "0123456789abcdef";
  std::string out(128, '0');
  for (int byte = 0; byte < LINE_BYTES; ++byte) {
    std::uint64_t b = (line.w[byte / 8] >> (8 * (byte % 8))) & 0xff;
    out[2 * byte] = digits[b >> 4];
    out[2 * byte + 1] = digits[b & 0xf];
  }
  return out;
}

}  // namespace hetcache
