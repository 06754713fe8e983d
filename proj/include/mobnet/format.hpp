#pragma once

#include <charconv>
#include <cstdio>
#include <string>

#include "mobnet/ratio.hpp"

namespace mobnet {

// Fixed-point rendering used by every table and CSV: ratios at a configured
// number of decimals (default 4), counts as raw integers.
inline std::string format_fixed(double value, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, value);
  std::string out(buf);
  // avoid a sign on a value that rounds to zero
  if (out.find_first_not_of("-0.") == std::string::npos && out[0] == '-') out.erase(0, 1);
  return out;
}

// Exact decimal rounding of a rational, half away from zero; never goes
// through floating point.
inline std::string format_ratio_fixed(const Ratio& r, int places) {
  __int128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = r.num() < 0;
  const __int128 num = negative ? -static_cast<__int128>(r.num()) : r.num();
  const __int128 den = r.den();
  __int128 scaled = (num * scale * 2 + den) / (2 * den);  // round half up on |value|
  std::string digits;
  if (scaled == 0) digits = "0";
  while (scaled > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  }
  while (digits.size() < static_cast<std::size_t>(places) + 1) digits.insert(digits.begin(), '0');
  std::string out = digits.substr(0, digits.size() - places);
  if (places > 0) out += "." + digits.substr(digits.size() - places);
  if (negative && out.find_first_not_of("0.") != std::string::npos) out.insert(out.begin(), '-');
  return out;
}

// Shortest representation that round-trips, for values that must survive
// serialize/parse cycles.
inline std::string format_shortest(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace mobnet
