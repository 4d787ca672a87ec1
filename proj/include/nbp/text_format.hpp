#pragma once

#include <charconv>
#include <string>

namespace nbp {

// Shortest round-trip decimal form via to_chars: locale independent, so CSV
// and bundle output is byte-identical across machines.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace nbp
