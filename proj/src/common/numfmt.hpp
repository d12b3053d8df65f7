#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace spdcoam::detail {

// Shortest round-trip decimal form; '.' radix regardless of locale.
inline std::string fmt_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string fmt_int(long long v) { return std::to_string(v); }

}  // namespace spdcoam::detail
