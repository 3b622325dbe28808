#pragma once

#include <cstdio>
#include <string>

namespace ddmpc::io {

/// Round-trip-exact decimal form of a double (shortest %.17g); stable byte
/// output for CSV determinism.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace ddmpc::io
