#ifndef TRUSTCONS_FORMAT_HPP
#define TRUSTCONS_FORMAT_HPP

#include <cmath>
#include <cstdio>
#include <string>

namespace trustcons {

/// Fixed-width scientific formatting used by every CSV writer, so outputs
/// are byte-stable for identical inputs.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", x);
  return buf;
}

}  // namespace trustcons

#endif  // TRUSTCONS_FORMAT_HPP
